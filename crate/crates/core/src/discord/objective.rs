//! The bracketed discord sum for a fixed measurement tree.
//!
//! [`discord_objective`] evaluates it literally: full-register projectors,
//! marginals by partial trace, entropies by eigendecomposition.
//! [`ObjectiveEvaluator`] is the fast path used by the oracle. A rank-one
//! projection on the leftmost remaining qubit leaves `|ψ⟩⟨ψ| ⊗ ⟨ψ|ρ|ψ⟩`, so
//! it tracks only the unnormalized state of the unmeasured qubits and reads
//! each conditional entropy off a 2×2 marginal.

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::family::{build_density_matrix, FamilyCoefficients};
use crate::linalg::{binary_entropy, DensityMatrix};
use crate::measurement::{
    conditional_entropy_term, unconditional_term, MeasurementFrame, MeasurementTree,
    NEGLIGIBLE_PROBABILITY,
};

/// `−S_{A₂…A_N|A₁} + Σ_{k=2}^{N} S_{A_k|Π^{A₁…A_{k−1}}}` for the given tree.
pub fn discord_objective(fc: &FamilyCoefficients, tree: &MeasurementTree) -> Result<f64> {
    let rho = build_density_matrix(fc)?;
    objective_for_state(&rho, tree)
}

pub(crate) fn objective_for_state(rho: &DensityMatrix, tree: &MeasurementTree) -> Result<f64> {
    let n = rho.num_qubits();
    if tree.num_qubits() != n {
        return invalid(format!(
            "tree has {} levels, a {n}-qubit state needs {}",
            tree.depth(),
            n - 1
        ));
    }
    let mut total = unconditional_term(rho)?;
    for k in 2..=n {
        total += conditional_entropy_term(rho, tree, k)?;
    }
    Ok(total)
}

pub struct ObjectiveEvaluator {
    num_qubits: usize,
    rho: Vec<Complex64>,
    unconditional: f64,
}

impl ObjectiveEvaluator {
    pub fn new(fc: &FamilyCoefficients) -> Result<Self> {
        Self::for_state(&build_density_matrix(fc)?)
    }

    pub fn for_state(rho: &DensityMatrix) -> Result<Self> {
        let n = rho.num_qubits();
        if n < 2 {
            return invalid("objective needs at least 2 qubits");
        }
        let dim = rho.dim();
        let m = rho.matrix();
        let flat = (0..dim * dim)
            .map(|idx| m.get(idx / dim, idx % dim))
            .collect();
        Ok(Self {
            num_qubits: n,
            rho: flat,
            unconditional: unconditional_term(rho)?,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Number of flat coordinates (`4 × frames`).
    pub fn dimension(&self) -> usize {
        4 * MeasurementTree::frame_count(self.num_qubits)
    }

    pub fn unconditional_term(&self) -> f64 {
        self.unconditional
    }

    pub fn evaluate(&self, tree: &MeasurementTree) -> Result<f64> {
        if tree.num_qubits() != self.num_qubits {
            return invalid(format!(
                "tree has {} levels, a {}-qubit state needs {}",
                tree.depth(),
                self.num_qubits,
                self.num_qubits - 1
            ));
        }
        Ok(self.evaluate_flat(&tree.to_flat()))
    }

    /// Objective at concatenated frame coordinates; each 4-vector is
    /// normalized before use, so any nonzero point is admissible.
    pub fn evaluate_flat(&self, coords: &[f64]) -> f64 {
        debug_assert_eq!(coords.len(), self.dimension());
        let mut scratch: Vec<Vec<Complex64>> = (1..self.num_qubits)
            .map(|level| vec![Complex64::new(0.0, 0.0); 1 << (2 * (self.num_qubits - level))])
            .collect();
        let mut acc = 0.0;
        self.descend(&self.rho, 0, 0, coords, &mut scratch, &mut acc);
        self.unconditional + acc
    }

    fn descend(
        &self,
        state: &[Complex64],
        level: usize,
        history: usize,
        coords: &[f64],
        scratch: &mut [Vec<Complex64>],
        acc: &mut f64,
    ) {
        let dim = 1usize << (self.num_qubits - level);
        let half = dim / 2;
        let idx = (1usize << level) - 1 + history;
        let frame = match MeasurementFrame::normalized([
            coords[4 * idx],
            coords[4 * idx + 1],
            coords[4 * idx + 2],
            coords[4 * idx + 3],
        ]) {
            Ok(f) => f,
            Err(_) => MeasurementFrame::z_basis(),
        };
        let (child_buf, rest) = scratch.split_first_mut().expect("one buffer per level");

        for (k, psi) in frame.basis_vectors().iter().enumerate() {
            contract_leftmost(state, dim, psi, child_buf);
            let child = &child_buf[..half * half];
            let p: f64 = (0..half).map(|i| child[i * half + i].re).sum();
            if p < NEGLIGIBLE_PROBABILITY {
                continue;
            }
            *acc += p * leftmost_entropy(child, half, p);
            if level + 2 < self.num_qubits {
                // Deeper levels write only into `rest`, so `child` stays intact.
                self.descend(child, level + 1, 2 * history + k, coords, rest, acc);
            }
        }
    }
}

/// `out = (⟨ψ| ⊗ I) ρ (|ψ⟩ ⊗ I)` for the leftmost qubit of a `dim`-dimensional state.
fn contract_leftmost(rho: &[Complex64], dim: usize, psi: &[Complex64; 2], out: &mut [Complex64]) {
    let h = dim / 2;
    let w = [
        [psi[0].conj() * psi[0], psi[0].conj() * psi[1]],
        [psi[1].conj() * psi[0], psi[1].conj() * psi[1]],
    ];
    for i in 0..h {
        for j in 0..h {
            let a = rho[i * dim + j];
            let b = rho[i * dim + j + h];
            let c = rho[(i + h) * dim + j];
            let d = rho[(i + h) * dim + j + h];
            out[i * h + j] = w[0][0] * a + w[0][1] * b + w[1][0] * c + w[1][1] * d;
        }
    }
}

/// Entropy of the leftmost-qubit marginal of an unnormalized state of trace `p`.
fn leftmost_entropy(state: &[Complex64], dim: usize, p: f64) -> f64 {
    let h = dim / 2;
    let (mut a, mut d, mut b) = (0.0, 0.0, Complex64::new(0.0, 0.0));
    for i in 0..h {
        a += state[i * dim + i].re;
        d += state[(i + h) * dim + i + h].re;
        b += state[i * dim + i + h];
    }
    let r = (((a - d) / p).powi(2) + 4.0 * (b / p).norm_sqr())
        .sqrt()
        .min(1.0);
    binary_entropy((1.0 + r) / 2.0)
}
