//! Brute-force minimization of the discord objective over measurement trees.
//!
//! Each restart draws every frame uniformly from the unit 3-sphere and
//! refines with a downhill simplex over the flattened coordinates. Frames are
//! projected back onto the sphere at every evaluation. Restarts run in
//! parallel; the reported optimum is the lowest value, ties going to the
//! lowest restart index, so output does not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::objective::ObjectiveEvaluator;
use crate::discord::closed_form_discord;
use crate::error::{invalid, Error, Result};
use crate::family::FamilyCoefficients;
use crate::measurement::MeasurementTree;
use crate::optimize::NelderMead;

pub const MAX_ORACLE_QUBITS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            restarts: 400,
            seed: 0,
            max_iters: 2000,
            tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleResult {
    pub value_bits: f64,
    pub best_tree: MeasurementTree,
    pub best_restart: usize,
    pub restart_count: usize,
    pub objective_evaluations: usize,
    pub closed_form_bits: f64,
    /// `value_bits − closed_form_bits`
    pub gap_to_closed_form: f64,
}

struct RestartOutcome {
    value: f64,
    x: Vec<f64>,
    evaluations: usize,
}

/// Seeds restart `index` independently of how many restarts run.
fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn oracle_discord(fc: &FamilyCoefficients, cfg: &OracleConfig) -> Result<OracleResult> {
    let n = fc.num_qubits();
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::UnsupportedSize {
            num_qubits: n,
            max: MAX_ORACLE_QUBITS,
        });
    }
    if cfg.restarts == 0 {
        return invalid("oracle needs at least one restart");
    }
    let closed = closed_form_discord(fc)?.value_bits;
    let evaluator = ObjectiveEvaluator::new(fc)?;
    let nm = NelderMead {
        max_iters: cfg.max_iters,
        f_tol: cfg.tol,
        ..NelderMead::default()
    };

    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(cfg.seed, r);
            let x0 = MeasurementTree::random(&mut rng, n)
                .expect("n >= 2")
                .to_flat();
            let m = nm.minimize(|x| evaluator.evaluate_flat(x), &x0);
            RestartOutcome {
                value: m.value,
                x: m.x,
                evaluations: m.evaluations,
            }
        })
        .collect();

    let (best_restart, best) = outcomes
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .expect("restarts >= 1");
    let best_tree = MeasurementTree::from_flat(n, &best.x)?;

    Ok(OracleResult {
        value_bits: best.value,
        best_tree,
        best_restart,
        restart_count: cfg.restarts,
        objective_evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        closed_form_bits: closed,
        gap_to_closed_form: best.value - closed,
    })
}
