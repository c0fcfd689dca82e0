//! Discord under the local phase-flip channel.
//!
//! Each qubit dephases with Kraus operators `diag(√(1−p/2), √(1−p/2))` and
//! `diag(√(p/2), −√(p/2))`. On the family this scales `c₁, c₂` by `(1−p)^N`
//! and leaves `c₃` fixed, so evolved states stay in the family.

use num_complex::Complex64;

use crate::discord::{closed_form_discord, defect_unchecked, Category};
use crate::error::{invalid, Error, Result};
use crate::family::{is_physical, FamilyCoefficients};
use crate::linalg::{embed, ComplexMatrix, DensityMatrix};
use crate::numfmt::sci17;

/// Flip strength from a dephasing rate and elapsed time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    pub p: f64,
    pub gamma: f64,
    pub t: f64,
}

impl ChannelParams {
    /// `p = 1 − exp(−γt)`
    pub fn from_rate(gamma: f64, t: f64) -> Result<Self> {
        if !(gamma >= 0.0 && t >= 0.0) {
            return invalid(format!("need gamma >= 0 and t >= 0, got {gamma}, {t}"));
        }
        Ok(Self {
            p: -(-gamma * t).exp_m1(),
            gamma,
            t,
        })
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("channel strength p = {p} outside [0, 1]"));
    }
    Ok(())
}

/// `(c₁, c₂, c₃) ↦ ((1−p)^N c₁, (1−p)^N c₂, c₃)`
pub fn phase_flip_coefficients(fc: &FamilyCoefficients, p: f64) -> Result<FamilyCoefficients> {
    check_p(p)?;
    let n = fc.num_qubits();
    let s = (1.0 - p).powi(n as i32);
    let [c1, c2, c3] = fc.coefficients();
    FamilyCoefficients::new(n, s * c1, s * c2, c3)
}

/// `[Γ₀^{(A₁)}, Γ₁^{(A₁)}, …, Γ₀^{(A_N)}, Γ₁^{(A_N)}]`, each embedded in the
/// full register.
pub fn kraus_operators(num_qubits: usize, p: f64) -> Result<Vec<ComplexMatrix>> {
    check_p(p)?;
    if num_qubits == 0 {
        return invalid("need at least one qubit");
    }
    let keep = (1.0 - p / 2.0).sqrt();
    let flip = (p / 2.0).sqrt();
    let g0 = diag(keep, keep);
    let g1 = diag(flip, -flip);
    let mut out = Vec::with_capacity(2 * num_qubits);
    for q in 0..num_qubits {
        out.push(embed(&g0, q, num_qubits)?);
        out.push(embed(&g1, q, num_qubits)?);
    }
    Ok(out)
}

fn diag(a: f64, b: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => Complex64::new(a, 0.0),
        (1, 1) => Complex64::new(b, 0.0),
        _ => Complex64::new(0.0, 0.0),
    })
    .expect("2x2")
}

/// Applies the channel qubit by qubit: `ρ ↦ Σ_k Γ_k^{(A_q)} ρ Γ_k^{(A_q)†}` for
/// every `q`, i.e. the product channel `⊗_q ε_q`.
pub fn apply_phase_flip(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    let n = rho.num_qubits();
    let ops = kraus_operators(n, p)?;
    let mut m = rho.matrix().clone();
    for pair in ops.chunks_exact(2) {
        let a = m.conjugate_by(&pair[0])?;
        let b = m.conjugate_by(&pair[1])?;
        m = a.add(&b)?;
    }
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub p: f64,
    pub evolved: FamilyCoefficients,
    /// `ξ` of the evolved state.
    pub delta: f64,
    /// `max |c_j|` of the evolved state.
    pub theta: f64,
    pub physical: bool,
    /// `None` where the evolved state is unphysical.
    pub discord_bits: Option<f64>,
}

pub fn discord_trajectory(fc: &FamilyCoefficients, p_grid: &[f64]) -> Result<Vec<TrajectoryPoint>> {
    p_grid
        .iter()
        .map(|&p| {
            let evolved = phase_flip_coefficients(fc, p)?;
            let physical = is_physical(&evolved);
            let discord_bits = if physical {
                Some(closed_form_discord(&evolved)?.value_bits)
            } else {
                None
            };
            Ok(TrajectoryPoint {
                p,
                evolved,
                delta: evolved.xi(),
                theta: evolved.c_max(),
                physical,
                discord_bits,
            })
        })
        .collect()
}

/// `steps + 1` evenly spaced points covering `[0, 1]`.
pub fn uniform_grid(steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return invalid("grid needs at least one step");
    }
    Ok((0..=steps).map(|i| i as f64 / steps as f64).collect())
}

pub const TRAJECTORY_CSV_HEADER: &str = "p,c1,c2,c3,delta,theta,discord,physical";

/// One row per point; unphysical rows leave the discord column empty.
pub fn trajectory_csv(points: &[TrajectoryPoint]) -> String {
    let mut out = String::from(TRAJECTORY_CSV_HEADER);
    out.push('\n');
    for pt in points {
        let [c1, c2, c3] = pt.evolved.coefficients();
        let discord = pt.discord_bits.map(sci17).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            sci17(pt.p),
            sci17(c1),
            sci17(c2),
            sci17(c3),
            sci17(pt.delta),
            sci17(pt.theta),
            discord,
            pt.physical
        ));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionPoint {
    /// `1 − (|c₃|/|c₁|)^{1/N}`
    pub analytic: f64,
    /// Kink location found by bisection on the closed-form trajectory.
    pub bisection: f64,
}

const PRODUCT_TOL: f64 = 1e-12;

/// Where the frozen plateau of an `N ≡ 0 (mod 4)` state with `c₂ = c₁c₃`
/// ends: `(1−p*)^N |c₁| = |c₃|`.
pub fn transition_point(fc: &FamilyCoefficients) -> Result<TransitionPoint> {
    let n = fc.num_qubits();
    let [c1, c2, c3] = fc.coefficients();
    if fc.category() != Category::ZeroMod4 {
        return invalid(format!("N = {n} is not a multiple of 4"));
    }
    if (c2 - c1 * c3).abs() > PRODUCT_TOL {
        return invalid(format!("c2 = {c2} differs from c1*c3 = {}", c1 * c3));
    }
    if c3 == 0.0 {
        return invalid("c3 must be nonzero");
    }
    if c3.abs() > c1.abs() {
        return invalid(format!("|c3| = {} exceeds |c1| = {}", c3.abs(), c1.abs()));
    }
    if !is_physical(fc) {
        let min = crate::family::spectrum_closed_form(fc).min_eigenvalue();
        return Err(Error::InvalidState {
            min_eigenvalue: min,
        });
    }
    let analytic = 1.0 - (c3.abs() / c1.abs()).powf(1.0 / n as f64);
    Ok(TransitionPoint {
        analytic,
        bisection: bisect_plateau_end(fc)?,
    })
}

/// Largest `p` at which the discord still equals its plateau value `f(|c₃|)`.
fn bisect_plateau_end(fc: &FamilyCoefficients) -> Result<f64> {
    let plateau = defect_unchecked(fc.coefficients()[2].abs());
    let on_plateau = |p: f64| -> Result<bool> {
        let d = closed_form_discord(&phase_flip_coefficients(fc, p)?)?.value_bits;
        Ok((d - plateau).abs() <= 1e-13)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    if !on_plateau(lo)? {
        return Ok(0.0);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if on_plateau(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Clone, Debug, PartialEq)]
pub enum MonotonicityReport {
    Pass { max_slope: f64 },
    Fail { p: f64, slope: f64 },
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        matches!(self, Self::Pass { .. })
    }
}

/// Slope tolerance for the monotone-decrease check.
pub const SLOPE_TOL: f64 = 1e-12;

/// Central-difference slope of the discord at every interior grid point.
pub fn finite_difference_slopes(points: &[TrajectoryPoint]) -> Result<Vec<(f64, f64)>> {
    let values: Vec<f64> = points
        .iter()
        .map(|pt| {
            pt.discord_bits
                .ok_or_else(|| Error::InvalidArgument(format!("unphysical point at p = {}", pt.p)))
        })
        .collect::<Result<_>>()?;
    Ok((1..points.len().saturating_sub(1))
        .map(|i| {
            let slope = (values[i + 1] - values[i - 1]) / (points[i + 1].p - points[i - 1].p);
            (points[i].p, slope)
        })
        .collect())
}

/// Odd-`N` check that discord never increases along the grid.
pub fn certify_monotone_decrease(
    fc: &FamilyCoefficients,
    p_grid: &[f64],
) -> Result<MonotonicityReport> {
    if fc.category() != Category::Odd {
        return invalid(format!("N = {} is even", fc.num_qubits()));
    }
    if p_grid.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("grid must be strictly increasing");
    }
    let points = discord_trajectory(fc, p_grid)?;
    let slopes = finite_difference_slopes(&points)?;
    let mut max_slope = f64::NEG_INFINITY;
    for (p, slope) in slopes {
        if slope >= SLOPE_TOL {
            return Ok(MonotonicityReport::Fail { p, slope });
        }
        max_slope = max_slope.max(slope);
    }
    Ok(MonotonicityReport::Pass { max_slope })
}
