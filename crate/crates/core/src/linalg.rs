//! Dense complex matrices for small qubit registers.
//!
//! Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
//! basis-state index. All entropies are in bits.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::numfmt::sci17;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const NEGATIVE_EIGENVALUE_TOL: f64 = 1e-10;
/// Eigenvalues within this distance of 0 or 1 are clamped before taking logs.
pub const CLAMP_TOL: f64 = 1e-12;

const MAX_QUBITS: usize = 7;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square complex matrix whose dimension is a power of two.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(inner: DMatrix<Complex64>) -> Result<Self> {
        let (r, c) = inner.shape();
        if r != c {
            return invalid(format!("matrix is not square: {r}x{c}"));
        }
        if r < 2 || !r.is_power_of_two() {
            return invalid(format!("dimension {r} is not a power of two >= 2"));
        }
        Ok(Self(inner))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return invalid("ragged or non-square rows");
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::new(DMatrix::from_fn(dim, dim, f))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(DMatrix::zeros(dim, dim))
    }

    /// Pauli matrix σ_j for j ∈ {1, 2, 3}.
    pub fn pauli(j: usize) -> Result<Self> {
        let rows = match j {
            1 => [[ZERO, ONE], [ONE, ZERO]],
            2 => [[ZERO, -I], [I, ZERO]],
            3 => [[ONE, ZERO], [ZERO, -ONE]],
            _ => return invalid(format!("Pauli index {j} not in 1..=3")),
        };
        Ok(Self(DMatrix::from_fn(2, 2, |r, c| rows[r][c])))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self(&self.0 * &other.0))
    }

    /// `u · self · u†`
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        self.same_dim(u)?;
        Ok(Self(&u.0 * &self.0 * u.0.adjoint()))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Debug dump: one line per row, entries `re+imj` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.0[(i, j)];
                    let sign = if z.im < 0.0 { '-' } else { '+' };
                    format!("{}{}{}j", sci17(z.re + 0.0), sign, sci17(z.im.abs()))
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return invalid(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            ));
        }
        Ok(())
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Kronecker product of a non-empty list, left to right.
pub fn kron_all(factors: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty Kronecker product".into()))?;
    Ok(rest.iter().fold(first.clone(), |acc, m| kron(&acc, m)))
}

/// Single-qubit operator `op` acting on `qubit` of an `n`-qubit register.
pub fn embed(op: &ComplexMatrix, qubit: usize, n: usize) -> Result<ComplexMatrix> {
    if op.dim() != 2 {
        return invalid("embedded operator must be 2x2");
    }
    if qubit >= n {
        return invalid(format!("qubit {qubit} out of range for {n} qubits"));
    }
    let id = ComplexMatrix::identity(2)?;
    let factors: Vec<_> = (0..n)
        .map(|q| if q == qubit { op.clone() } else { id.clone() })
        .collect();
    kron_all(&factors)
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    num_qubits: usize,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return invalid(format!("matrix is not Hermitian (defect {defect:e})"));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return invalid(format!("trace {tr} is not 1"));
        }
        let min = hermitian_eigenvalues(&matrix)?[0];
        if min < -NEGATIVE_EIGENVALUE_TOL {
            return Err(Error::InvalidState {
                min_eigenvalue: min,
            });
        }
        Ok(Self::from_matrix_unchecked(matrix))
    }

    /// Wraps a matrix the caller already knows to be a valid state.
    pub fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        let num_qubits = matrix.num_qubits();
        Self { matrix, num_qubits }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        let m = ComplexMatrix::identity(dim)?.scale(Complex64::new(1.0 / dim as f64, 0.0));
        Ok(Self::from_matrix_unchecked(m))
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TRACE_TOL {
            return invalid(format!("state vector has squared norm {norm}"));
        }
        let m = ComplexMatrix::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj())?;
        Ok(Self::from_matrix_unchecked(m))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Kronecker product of two states.
pub fn kron_states(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_matrix_unchecked(kron(&a.matrix, &b.matrix))
}

/// Reduced state on `keep` (sorted ascending; duplicates rejected).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.num_qubits();
    if keep.is_empty() {
        return invalid("keep set is empty");
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    if kept.windows(2).any(|w| w[0] == w[1]) {
        return invalid("keep set contains duplicate qubits");
    }
    if let Some(&q) = kept.iter().find(|&&q| q >= n) {
        return invalid(format!("qubit {q} out of range for {n} qubits"));
    }
    let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();

    // Full-register index of (kept configuration, traced configuration).
    let compose = |kbits: usize, tbits: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &q) in kept.iter().enumerate() {
            let bit = (kbits >> (kept.len() - 1 - pos)) & 1;
            idx |= bit << (n - 1 - q);
        }
        for (pos, &q) in traced.iter().enumerate() {
            let bit = (tbits >> (traced.len() - 1 - pos)) & 1;
            idx |= bit << (n - 1 - q);
        }
        idx
    };

    let kdim = 1usize << kept.len();
    let tdim = 1usize << traced.len();
    let full = rho.matrix.inner();
    let out = DMatrix::from_fn(kdim, kdim, |a, b| {
        (0..tdim)
            .map(|t| full[(compose(a, t), compose(b, t))])
            .sum::<Complex64>()
    });
    Ok(DensityMatrix::from_matrix_unchecked(ComplexMatrix(out)))
}

/// Real spectrum of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return invalid(format!("matrix is not Hermitian (defect {defect:e})"));
    }
    let mut evs: Vec<f64> =
        m.0.clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
    evs.sort_by(f64::total_cmp);
    Ok(evs)
}

/// `-Σ λ log₂ λ` over a spectrum, with `0 log 0 = 0`.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lambda in eigenvalues {
        if lambda < -NEGATIVE_EIGENVALUE_TOL {
            return Err(Error::InvalidState {
                min_eigenvalue: lambda,
            });
        }
        let lambda = clamp_unit(lambda);
        if lambda > 0.0 {
            s -= lambda * lambda.log2();
        }
    }
    Ok(s.max(0.0))
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    if rho.num_qubits() > MAX_QUBITS {
        return Err(Error::UnsupportedSize {
            num_qubits: rho.num_qubits(),
            max: MAX_QUBITS,
        });
    }
    entropy_of_spectrum(&hermitian_eigenvalues(&rho.matrix)?)
}

/// Binary Shannon entropy of `(p, 1 - p)`.
pub fn binary_entropy(p: f64) -> f64 {
    let p = clamp_unit(p);
    let q = 1.0 - p;
    let mut s = 0.0;
    if p > 0.0 {
        s -= p * p.log2();
    }
    if q > 0.0 {
        s -= q * q.log2();
    }
    s
}

fn clamp_unit(lambda: f64) -> f64 {
    if lambda < CLAMP_TOL {
        lambda.max(0.0)
    } else if lambda > 1.0 - CLAMP_TOL {
        lambda.min(1.0)
    } else {
        lambda
    }
}
