//! The state family `ρ = (I + Σ_j c_j σ_j^{⊗N}) / 2^N`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::discord::{classify, Category};
use crate::error::{invalid, Error, Result};
use crate::linalg::{entropy_of_spectrum, ComplexMatrix, DensityMatrix};

/// Eigenvalues above `-PHYSICAL_TOL` count as non-negative.
pub const PHYSICAL_TOL: f64 = 1e-12;

/// Largest register for which dense matrices are built.
pub const MAX_DENSE_QUBITS: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyCoefficients {
    num_qubits: usize,
    c: [f64; 3],
}

impl FamilyCoefficients {
    pub fn new(num_qubits: usize, c1: f64, c2: f64, c3: f64) -> Result<Self> {
        if num_qubits < 2 {
            return invalid(format!("need at least 2 qubits, got {num_qubits}"));
        }
        let c = [c1, c2, c3];
        if let Some(bad) = c.iter().find(|x| !x.is_finite() || x.abs() > 1.0) {
            return invalid(format!("coefficient {bad} outside [-1, 1]"));
        }
        Ok(Self { num_qubits, c })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn coefficients(&self) -> [f64; 3] {
        self.c
    }

    pub fn category(&self) -> Category {
        classify(self.num_qubits).expect("num_qubits >= 2 by construction")
    }

    /// `ξ = √(c₁² + c₂² + c₃²)`
    pub fn xi(&self) -> f64 {
        self.c.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `max |c_j|`
    pub fn c_max(&self) -> f64 {
        self.c.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Index (0-based) of the largest `|c_j|`; ties resolve to the lowest index.
    pub fn dominant_axis(&self) -> usize {
        let mut best = 0;
        for j in 1..3 {
            if self.c[j].abs() > self.c[best].abs() {
                best = j;
            }
        }
        best
    }
}

impl fmt::Display for FamilyCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{},{},{}",
            self.num_qubits, self.c[0], self.c[1], self.c[2]
        )
    }
}

impl FromStr for FamilyCoefficients {
    type Err = Error;

    /// Parses `N:c1,c2,c3`, e.g. `4:0.8,0.4,0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let (n, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected N:c1,c2,c3, got {s:?}")))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad qubit count {n:?}")))?;
        let cs: Vec<f64> = rest
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {x:?}")))
            })
            .collect::<Result<_>>()?;
        if cs.len() != 3 {
            return Err(Error::Parse(format!(
                "expected 3 coefficients, got {}",
                cs.len()
            )));
        }
        Self::new(n, cs[0], cs[1], cs[2])
    }
}

/// Distinct eigenvalues with multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub entries: Vec<(f64, usize)>,
}

impl SpectrumReport {
    pub fn min_eigenvalue(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(v, _)| v)
            .fold(f64::INFINITY, f64::min)
    }

    /// All eigenvalues expanded by multiplicity, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .entries
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat_n(v, m))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }
}

/// Numerators `2^N λ` of the four distinct eigenvalues for even `N`.
pub(crate) fn even_numerators(category: Category, [c1, c2, c3]: [f64; 3]) -> [f64; 4] {
    match category {
        Category::TwoMod4 => [
            1.0 - c1 - c2 - c3,
            1.0 - c1 + c2 + c3,
            1.0 + c1 - c2 + c3,
            1.0 + c1 + c2 - c3,
        ],
        Category::ZeroMod4 => [
            1.0 + c1 - c2 - c3,
            1.0 - c1 + c2 - c3,
            1.0 - c1 - c2 + c3,
            1.0 + c1 + c2 + c3,
        ],
        Category::Odd => unreachable!("odd registers have two distinct eigenvalues"),
    }
}

/// Closed-form spectrum; total, so it may report negative eigenvalues.
pub fn spectrum_closed_form(fc: &FamilyCoefficients) -> SpectrumReport {
    let n = fc.num_qubits;
    let scale = (n as f64).exp2().recip();
    let entries = match fc.category() {
        Category::Odd => {
            let xi = fc.xi();
            let m = 1usize << (n - 1);
            vec![((1.0 - xi) * scale, m), ((1.0 + xi) * scale, m)]
        }
        cat => {
            let m = 1usize << (n - 2);
            even_numerators(cat, fc.c)
                .iter()
                .map(|&a| (a * scale, m))
                .collect()
        }
    };
    SpectrumReport { entries }
}

pub fn is_physical(fc: &FamilyCoefficients) -> bool {
    spectrum_closed_form(fc).min_eigenvalue() >= -PHYSICAL_TOL
}

fn require_physical(fc: &FamilyCoefficients) -> Result<()> {
    let min = spectrum_closed_form(fc).min_eigenvalue();
    if min < -PHYSICAL_TOL {
        return Err(Error::InvalidState {
            min_eigenvalue: min,
        });
    }
    Ok(())
}

/// Dense `2^N × 2^N` family state.
///
/// Entries come straight from the bit structure of the Pauli strings:
/// `σ₁^{⊗N}` and `σ₂^{⊗N}` connect `i` with `i ⊕ (2^N − 1)`, `σ₃^{⊗N}` is
/// diagonal with sign `(−1)^{popcount(i)}`.
pub fn build_density_matrix(fc: &FamilyCoefficients) -> Result<DensityMatrix> {
    require_physical(fc)?;
    let n = fc.num_qubits;
    if n > MAX_DENSE_QUBITS {
        return Err(Error::UnsupportedSize {
            num_qubits: n,
            max: MAX_DENSE_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mask = dim - 1;
    let scale = 1.0 / dim as f64;
    let [c1, c2, c3] = fc.c;
    let m = ComplexMatrix::from_fn(dim, |i, j| {
        if i == j {
            let sign = if i.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new((1.0 + c3 * sign) * scale, 0.0)
        } else if j == i ^ mask {
            // ⟨i|σ₂^{⊗N}|j⟩ = Π_q (−i if bit_q(i) = 0 else +i)
            let ones = i.count_ones() as usize;
            let zeros = n - ones;
            let phase = Complex64::i().powu(ones as u32) * (-Complex64::i()).powu(zeros as u32);
            (Complex64::new(c1, 0.0) + phase * c2) * scale
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?;
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// `S(ρ)` in bits from the closed-form spectrum.
pub fn global_entropy(fc: &FamilyCoefficients) -> Result<f64> {
    require_physical(fc)?;
    entropy_of_spectrum(&spectrum_closed_form(fc).expanded())
}

/// Uniform sample from the physical region by rejection from the cube.
pub fn random_physical(rng: &mut impl Rng, num_qubits: usize) -> Result<FamilyCoefficients> {
    loop {
        let fc = FamilyCoefficients::new(
            num_qubits,
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        )?;
        if is_physical(&fc) {
            return Ok(fc);
        }
    }
}
