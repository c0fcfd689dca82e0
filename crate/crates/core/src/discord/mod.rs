//! Multipartite discord of the state family.
//!
//! Closed forms by register size:
//!
//! * odd `N`: `f(ξ) − f(c)`
//! * `N ≡ 2 (mod 4)`: `¼ Σ a log₂ a − f(c)` over `a ∈ {1−c₁−c₂−c₃, 1−c₁+c₂+c₃, 1+c₁−c₂+c₃, 1+c₁+c₂−c₃}`
//! * `N ≡ 0 (mod 4)`: `¼ Σ a log₂ a − f(c)` over `a ∈ {1+c₁−c₂−c₃, 1−c₁+c₂−c₃, 1−c₁−c₂+c₃, 1+c₁+c₂+c₃}`
//!
//! with `ξ = |c|`, `c = max |c_j|` and `f(x) = ½(1+x)log₂(1+x) + ½(1−x)log₂(1−x)`.

mod objective;
mod oracle;

pub use objective::{discord_objective, ObjectiveEvaluator};
pub use oracle::{oracle_discord, OracleConfig, OracleResult, MAX_ORACLE_QUBITS};

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::family::{even_numerators, spectrum_closed_form, FamilyCoefficients, PHYSICAL_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    Odd,
    TwoMod4,
    ZeroMod4,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Odd => "odd",
            Category::TwoMod4 => "2mod4",
            Category::ZeroMod4 => "0mod4",
        })
    }
}

pub fn classify(num_qubits: usize) -> Result<Category> {
    match num_qubits {
        0 | 1 => invalid(format!("need at least 2 qubits, got {num_qubits}")),
        n if n % 2 == 1 => Ok(Category::Odd),
        n if n % 4 == 2 => Ok(Category::TwoMod4),
        _ => Ok(Category::ZeroMod4),
    }
}

const DEFECT_RANGE_TOL: f64 = 1e-12;

/// `f(x) = ½(1+x)log₂(1+x) + ½(1−x)log₂(1−x)` on `[0, 1]`.
///
/// Increases from `f(0) = 0` to `f(1) = 1`; equals `1 − h((1+x)/2)` where
/// `h` is the binary entropy.
pub fn entropy_defect(x: f64) -> Result<f64> {
    if !(-DEFECT_RANGE_TOL..=1.0 + DEFECT_RANGE_TOL).contains(&x) {
        return invalid(format!("entropy_defect argument {x} outside [0, 1]"));
    }
    Ok(defect_unchecked(x.clamp(0.0, 1.0)))
}

/// Caller guarantees `0 ≤ x ≤ 1`.
pub(crate) fn defect_unchecked(x: f64) -> f64 {
    if x >= 1.0 {
        return 1.0;
    }
    let plus = (1.0 + x) * x.ln_1p();
    let minus = (1.0 - x) * (-x).ln_1p();
    ((plus + minus) / (2.0 * std::f64::consts::LN_2)).max(0.0)
}

fn xlog2x(a: f64) -> f64 {
    if a <= 0.0 {
        0.0
    } else {
        a * a.log2()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormReport {
    pub category: Category,
    pub xi: f64,
    pub c_max: f64,
    /// 0-based index of the coefficient with the largest magnitude (lowest
    /// index on ties); measuring every qubit along this Pauli axis attains
    /// the minimum.
    pub optimal_axis: usize,
    pub value_bits: f64,
}

/// Closed-form discord in bits. Fails on unphysical coefficients.
pub fn closed_form_discord(fc: &FamilyCoefficients) -> Result<ClosedFormReport> {
    let min = spectrum_closed_form(fc).min_eigenvalue();
    if min < -PHYSICAL_TOL {
        return Err(Error::InvalidState {
            min_eigenvalue: min,
        });
    }
    let category = fc.category();
    let xi = fc.xi();
    let c_max = fc.c_max();
    let first = match category {
        Category::Odd => defect_unchecked(xi.min(1.0)),
        cat => {
            let nums = even_numerators(cat, fc.coefficients());
            0.25 * nums.iter().map(|&a| xlog2x(a)).sum::<f64>()
        }
    };
    Ok(ClosedFormReport {
        category,
        xi,
        c_max,
        optimal_axis: fc.dominant_axis(),
        value_bits: first - defect_unchecked(c_max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn fc(n: usize, c1: f64, c2: f64, c3: f64) -> FamilyCoefficients {
        FamilyCoefficients::new(n, c1, c2, c3).unwrap()
    }

    fn value(n: usize, c1: f64, c2: f64, c3: f64) -> f64 {
        closed_form_discord(&fc(n, c1, c2, c3)).unwrap().value_bits
    }

    #[test]
    fn classify_by_register_size() {
        assert_eq!(classify(3).unwrap(), Category::Odd);
        assert_eq!(classify(5).unwrap(), Category::Odd);
        assert_eq!(classify(2).unwrap(), Category::TwoMod4);
        assert_eq!(classify(6).unwrap(), Category::TwoMod4);
        assert_eq!(classify(4).unwrap(), Category::ZeroMod4);
        assert_eq!(classify(8).unwrap(), Category::ZeroMod4);
        assert!(classify(1).is_err());
        assert!(classify(0).is_err());
    }

    #[test]
    fn defect_reference_values() {
        assert_eq!(entropy_defect(0.0).unwrap(), 0.0);
        assert_eq!(entropy_defect(1.0).unwrap(), 1.0);
        // mpmath, 40 digits: 0.75·log₂1.5 − 0.25
        assert_abs_diff_eq!(
            entropy_defect(0.5).unwrap(),
            0.18872187554086714,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            entropy_defect(0.05).unwrap(),
            0.0018041209571899134,
            epsilon = 1e-16
        );
        assert_eq!(entropy_defect(1.0 + 5e-13).unwrap(), 1.0);
        assert!(entropy_defect(1.01).is_err());
        assert!(entropy_defect(-0.1).is_err());
    }

    #[test]
    fn defect_is_monotone_and_accurate_near_one() {
        let mut prev = -1.0;
        for i in 0..=10_000 {
            let x = i as f64 / 10_000.0;
            let v = entropy_defect(x).unwrap();
            assert!(v > prev || (i == 0 && v == 0.0));
            prev = v;
        }
        // 1 − h((1+x)/2) at x = 1 − 1e−9 from mpmath.
        assert_abs_diff_eq!(
            entropy_defect(1.0 - 1e-9).unwrap(),
            0.999_999_983_829_976,
            epsilon = 1e-14
        );
    }

    #[test]
    fn corner_and_classical_values() {
        for n in 2..=8 {
            assert_eq!(value(n, 0.0, 0.0, 0.0), 0.0);
            for c in [-1.0, -0.3, 0.7, 1.0] {
                assert_abs_diff_eq!(value(n, c, 0.0, 0.0), 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(value(n, 0.0, c, 0.0), 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(value(n, 0.0, 0.0, c), 0.0, epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(value(4, 1.0, 1.0, 1.0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(value(2, 1.0, -1.0, 1.0), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn three_qubit_reference_value() {
        // f(√0.14) − f(0.3), mpmath at 40 digits.
        let r = closed_form_discord(&fc(3, 0.3, 0.2, 0.1)).unwrap();
        assert_abs_diff_eq!(r.value_bits, 0.037555919308230073, epsilon = 1e-15);
        assert_eq!(r.category, Category::Odd);
        assert_abs_diff_eq!(r.xi, 0.14f64.sqrt(), epsilon = 1e-16);
        assert_eq!(r.c_max, 0.3);
        assert_eq!(r.optimal_axis, 0);
    }

    #[test]
    fn unphysical_rejected() {
        assert!(matches!(
            closed_form_discord(&fc(3, 0.8, 0.4, 0.5)),
            Err(Error::InvalidState { .. })
        ));
        assert!(closed_form_discord(&fc(2, 1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn report_bounds() {
        let r = closed_form_discord(&fc(4, 0.8, 0.4, 0.5)).unwrap();
        assert!(r.c_max <= r.xi && r.xi <= 3f64.sqrt() * r.c_max);
        assert!(r.value_bits >= -1e-12);
    }
}
