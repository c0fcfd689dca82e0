//! Projective qubit measurements and conditional measurement trees.
//!
//! A measurement frame is the unit 4-vector `(t, y₁, y₂, y₃)` of the unitary
//! `V = tI + i y·σ`; the measurement is `{V|k⟩⟨k|V† : k = 0, 1}`. The
//! parametrization is redundant (a projective qubit measurement has two
//! degrees of freedom, its Bloch axis) but harmless for optimization.
//!
//! A tree holds one frame per qubit `0..N-1` measured, conditioned on all
//! earlier outcomes. At level `k` the frame index is the outcome history read
//! as a binary number with qubit 0 as the most significant bit.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{embed, partial_trace, von_neumann_entropy, ComplexMatrix, DensityMatrix};

pub const FRAME_NORM_TOL: f64 = 1e-12;
/// Branches lighter than this are carried with weight zero.
pub const NEGLIGIBLE_PROBABILITY: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct MeasurementFrame {
    t: f64,
    y: [f64; 3],
}

impl MeasurementFrame {
    /// Requires `t² + |y|² = 1` within [`FRAME_NORM_TOL`].
    pub fn new(t: f64, y1: f64, y2: f64, y3: f64) -> Result<Self> {
        let norm2 = t * t + y1 * y1 + y2 * y2 + y3 * y3;
        if !norm2.is_finite() || (norm2 - 1.0).abs() > FRAME_NORM_TOL {
            return invalid(format!("frame is not normalized (|v|² = {norm2})"));
        }
        Ok(Self { t, y: [y1, y2, y3] })
    }

    /// Rescales any nonzero 4-vector onto the unit sphere.
    pub fn normalized(v: [f64; 4]) -> Result<Self> {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return invalid("cannot normalize a zero frame");
        }
        Ok(Self {
            t: v[0] / norm,
            y: [v[1] / norm, v[2] / norm, v[3] / norm],
        })
    }

    /// Computational-basis measurement (`V = I`).
    pub fn z_basis() -> Self {
        Self {
            t: 1.0,
            y: [0.0; 3],
        }
    }

    /// A frame measuring along σ_{axis+1}. These are the equality-case frames
    /// `(1/√2, 0, 1/√2, 0)`, `(1/√2, 1/√2, 0, 0)` and `(1, 0, 0, 0)`.
    pub fn along_axis(axis: usize) -> Result<Self> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match axis {
            0 => Ok(Self {
                t: h,
                y: [0.0, h, 0.0],
            }),
            1 => Ok(Self {
                t: h,
                y: [h, 0.0, 0.0],
            }),
            2 => Ok(Self::z_basis()),
            _ => invalid(format!("axis {axis} not in 0..3")),
        }
    }

    /// Uniformly distributed on the unit 3-sphere.
    pub fn random(rng: &mut impl Rng) -> Self {
        loop {
            let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            if let Ok(f) = Self::normalized(v) {
                return f;
            }
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> [f64; 3] {
        self.y
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.t, self.y[0], self.y[1], self.y[2]]
    }

    pub fn negated(&self) -> Self {
        Self {
            t: -self.t,
            y: self.y.map(|x| -x),
        }
    }

    /// `V = tI + i(y₁σ₁ + y₂σ₂ + y₃σ₃)`
    pub fn unitary(&self) -> ComplexMatrix {
        let [a, b] = self.basis_vectors();
        ComplexMatrix::from_fn(2, |r, c| if c == 0 { a[r] } else { b[r] })
            .expect("2x2 is a valid dimension")
    }

    /// Columns of `V`: the outcome-0 and outcome-1 states `V|0⟩`, `V|1⟩`.
    pub fn basis_vectors(&self) -> [[Complex64; 2]; 2] {
        let [y1, y2, y3] = self.y;
        let t = self.t;
        [
            [Complex64::new(t, y3), Complex64::new(-y2, y1)],
            [Complex64::new(y2, y1), Complex64::new(t, -y3)],
        ]
    }

    /// `V|k⟩⟨k|V†`
    pub fn projector(&self, outcome: usize) -> ComplexMatrix {
        let psi = self.basis_vectors()[outcome & 1];
        ComplexMatrix::from_fn(2, |r, c| psi[r] * psi[c].conj()).expect("2x2")
    }
}

impl TryFrom<[f64; 4]> for MeasurementFrame {
    type Error = Error;

    fn try_from(v: [f64; 4]) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

impl From<MeasurementFrame> for [f64; 4] {
    fn from(f: MeasurementFrame) -> Self {
        f.as_array()
    }
}

/// Bloch vector of the outcome-0 state of a frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochAxis(pub [f64; 3]);

impl BlochAxis {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// `z₁ = 2(−t y₂ + y₁ y₃)`, `z₂ = 2(t y₁ + y₂ y₃)`, `z₃ = t² − y₁² − y₂² + y₃²`.
pub fn frame_to_bloch(f: &MeasurementFrame) -> Result<BlochAxis> {
    let norm2 = f.t * f.t + f.y.iter().map(|x| x * x).sum::<f64>();
    if (norm2 - 1.0).abs() > FRAME_NORM_TOL {
        return invalid(format!("frame is not normalized (|v|² = {norm2})"));
    }
    let t = f.t;
    let [y1, y2, y3] = f.y;
    Ok(BlochAxis([
        2.0 * (-t * y2 + y1 * y3),
        2.0 * (t * y1 + y2 * y3),
        t * t - y1 * y1 - y2 * y2 + y3 * y3,
    ]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TreeRepr", into = "TreeRepr")]
pub struct MeasurementTree {
    levels: Vec<Vec<MeasurementFrame>>,
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    levels: Vec<Vec<MeasurementFrame>>,
}

impl TryFrom<TreeRepr> for MeasurementTree {
    type Error = Error;

    fn try_from(r: TreeRepr) -> Result<Self> {
        Self::new(r.levels)
    }
}

impl From<MeasurementTree> for TreeRepr {
    fn from(t: MeasurementTree) -> Self {
        TreeRepr { levels: t.levels }
    }
}

impl MeasurementTree {
    /// Level `k` must hold exactly `2^k` frames.
    pub fn new(levels: Vec<Vec<MeasurementFrame>>) -> Result<Self> {
        if levels.is_empty() {
            return invalid("a measurement tree needs at least one level");
        }
        for (k, level) in levels.iter().enumerate() {
            if level.len() != 1 << k {
                return invalid(format!(
                    "level {k} holds {} frames, expected {}",
                    level.len(),
                    1usize << k
                ));
            }
        }
        Ok(Self { levels })
    }

    /// Tree for an `num_qubits` register with the same frame at every node.
    pub fn uniform(num_qubits: usize, frame: MeasurementFrame) -> Result<Self> {
        if num_qubits < 2 {
            return invalid("a tree needs at least 2 qubits");
        }
        Self::new((0..num_qubits - 1).map(|k| vec![frame; 1 << k]).collect())
    }

    pub fn random(rng: &mut impl Rng, num_qubits: usize) -> Result<Self> {
        if num_qubits < 2 {
            return invalid("a tree needs at least 2 qubits");
        }
        Self::new(
            (0..num_qubits - 1)
                .map(|k| (0..1 << k).map(|_| MeasurementFrame::random(rng)).collect())
                .collect(),
        )
    }

    /// Total number of frames for an `num_qubits` register: `2^{N-1} − 1`.
    pub fn frame_count(num_qubits: usize) -> usize {
        (1usize << (num_qubits - 1)) - 1
    }

    /// Rebuilds a tree from concatenated 4-vectors (level by level),
    /// normalizing each frame.
    pub fn from_flat(num_qubits: usize, coords: &[f64]) -> Result<Self> {
        if num_qubits < 2 {
            return invalid("a tree needs at least 2 qubits");
        }
        let frames = Self::frame_count(num_qubits);
        if coords.len() != 4 * frames {
            return invalid(format!(
                "expected {} coordinates, got {}",
                4 * frames,
                coords.len()
            ));
        }
        let mut chunks = coords.chunks_exact(4);
        let mut levels = Vec::with_capacity(num_qubits - 1);
        for k in 0..num_qubits - 1 {
            let level = (0..1 << k)
                .map(|_| {
                    let c = chunks.next().expect("length checked");
                    MeasurementFrame::normalized([c[0], c[1], c[2], c[3]])
                })
                .collect::<Result<Vec<_>>>()?;
            levels.push(level);
        }
        Self::new(levels)
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.levels
            .iter()
            .flatten()
            .flat_map(|f| f.as_array())
            .collect()
    }

    pub fn levels(&self) -> &[Vec<MeasurementFrame>] {
        &self.levels
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Register size this tree fully measures (all but the last qubit).
    pub fn num_qubits(&self) -> usize {
        self.levels.len() + 1
    }

    pub fn frame(&self, level: usize, history: usize) -> &MeasurementFrame {
        &self.levels[level][history]
    }

    /// First `depth` levels.
    pub fn truncated(&self, depth: usize) -> Result<Self> {
        if depth == 0 || depth > self.depth() {
            return invalid(format!(
                "cannot truncate a depth-{} tree to {depth} levels",
                self.depth()
            ));
        }
        Self::new(self.levels[..depth].to_vec())
    }

    pub fn map_frames(&self, f: impl Fn(&MeasurementFrame) -> MeasurementFrame) -> Self {
        Self {
            levels: self
                .levels
                .iter()
                .map(|l| l.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Clone, Debug)]
pub struct Branch {
    pub probability: f64,
    pub state: DensityMatrix,
    /// Outcome bits, qubit 0 first.
    pub history: String,
    /// Set when `probability < NEGLIGIBLE_PROBABILITY`; the state is then an
    /// arbitrary valid placeholder.
    pub negligible: bool,
}

#[derive(Clone, Debug)]
pub struct BranchEnsemble {
    pub branches: Vec<Branch>,
}

impl BranchEnsemble {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }
}

fn history_index(history: &str) -> usize {
    history
        .bytes()
        .fold(0usize, |acc, b| (acc << 1) | usize::from(b == b'1'))
}

fn measure_branch(parent: &Branch, qubit: usize, f: &MeasurementFrame) -> Result<[Branch; 2]> {
    let n = parent.state.num_qubits();
    let rho = parent.state.matrix();
    let out = [0usize, 1].map(|k| -> Result<Branch> {
        let proj = embed(&f.projector(k), qubit, n)?;
        let unnormalized = proj.matmul(rho)?.matmul(&proj)?;
        let p = unnormalized.trace().re.max(0.0);
        let history = format!("{}{k}", parent.history);
        let probability = parent.probability * p;
        let negligible = parent.negligible || probability < NEGLIGIBLE_PROBABILITY;
        let state = if p > 0.0 && !negligible {
            unnormalized.scale(Complex64::new(1.0 / p, 0.0))
        } else {
            let tr = proj.trace().re;
            proj.scale(Complex64::new(1.0 / tr, 0.0))
        };
        Ok(Branch {
            probability: if negligible { 0.0 } else { probability },
            state: DensityMatrix::from_matrix_unchecked(state),
            history,
            negligible,
        })
    });
    let [a, b] = out;
    Ok([a?, b?])
}

/// Measures one qubit; returns the two outcome branches.
pub fn measure_qubit(
    rho: &DensityMatrix,
    qubit: usize,
    f: &MeasurementFrame,
) -> Result<BranchEnsemble> {
    if qubit >= rho.num_qubits() {
        return invalid(format!(
            "qubit {qubit} out of range for {} qubits",
            rho.num_qubits()
        ));
    }
    let root = Branch {
        probability: 1.0,
        state: rho.clone(),
        history: String::new(),
        negligible: false,
    };
    Ok(BranchEnsemble {
        branches: measure_branch(&root, qubit, f)?.to_vec(),
    })
}

/// Measures qubits `0..depth` sequentially, each conditioned on earlier outcomes.
fn apply_levels(
    rho: &DensityMatrix,
    tree: &MeasurementTree,
    depth: usize,
) -> Result<BranchEnsemble> {
    if depth > tree.depth() || depth >= rho.num_qubits() {
        return invalid(format!(
            "cannot apply {depth} levels of a depth-{} tree to {} qubits",
            tree.depth(),
            rho.num_qubits()
        ));
    }
    let mut branches = vec![Branch {
        probability: 1.0,
        state: rho.clone(),
        history: String::new(),
        negligible: false,
    }];
    for level in 0..depth {
        let mut next = Vec::with_capacity(branches.len() * 2);
        for b in &branches {
            let frame = tree.frame(level, history_index(&b.history));
            next.extend(measure_branch(b, level, frame)?);
        }
        branches = next;
    }
    Ok(BranchEnsemble { branches })
}

/// Full conditional measurement of qubits `0..N-1`; `2^{N-1}` branches.
pub fn apply_tree(rho: &DensityMatrix, tree: &MeasurementTree) -> Result<BranchEnsemble> {
    if tree.num_qubits() != rho.num_qubits() {
        return invalid(format!(
            "tree measures {} qubits' worth of levels, state has {}",
            tree.num_qubits(),
            rho.num_qubits()
        ));
    }
    apply_levels(rho, tree, tree.depth())
}

/// `S_{A_k | Π^{A₁…A_{k−1}}}`: average entropy of the `A₁…A_k` marginal
/// after measuring the first `k − 1` qubits with the tree prefix. `k` is
/// 1-based as in `A_k`.
pub fn conditional_entropy_term(
    rho: &DensityMatrix,
    tree_prefix: &MeasurementTree,
    k: usize,
) -> Result<f64> {
    let n = rho.num_qubits();
    if k < 2 || k > n {
        return invalid(format!("k = {k} outside 2..={n}"));
    }
    let ensemble = apply_levels(rho, tree_prefix, k - 1)?;
    let keep: Vec<usize> = (0..k).collect();
    let mut total = 0.0;
    for b in ensemble.branches.iter().filter(|b| !b.negligible) {
        total += b.probability * von_neumann_entropy(&partial_trace(&b.state, &keep)?)?;
    }
    Ok(total)
}

/// `−S_{A₂…A_N|A₁} = −(S(ρ) − S(ρ_{A₁}))`
pub fn unconditional_term(rho: &DensityMatrix) -> Result<f64> {
    let s = von_neumann_entropy(rho)?;
    let s_a = von_neumann_entropy(&partial_trace(rho, &[0])?)?;
    Ok(-(s - s_a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{build_density_matrix, FamilyCoefficients};
    use crate::linalg::{kron_states, ComplexMatrix};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn family(n: usize, c: [f64; 3]) -> DensityMatrix {
        build_density_matrix(&FamilyCoefficients::new(n, c[0], c[1], c[2]).unwrap()).unwrap()
    }

    fn f_defect(x: f64) -> f64 {
        let a = (1.0 + x) / 2.0 * (1.0 + x).log2();
        let b = if x < 1.0 {
            (1.0 - x) / 2.0 * (1.0 - x).log2()
        } else {
            0.0
        };
        a + b
    }

    #[test]
    fn bloch_of_reference_frames() {
        assert_eq!(
            frame_to_bloch(&MeasurementFrame::z_basis()).unwrap().0,
            [0.0, 0.0, 1.0]
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = frame_to_bloch(&MeasurementFrame::new(h, 0.0, h, 0.0).unwrap()).unwrap();
        for (a, b) in z.0.iter().zip([-1.0, 0.0, 0.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        let z = frame_to_bloch(&MeasurementFrame::new(h, h, 0.0, 0.0).unwrap()).unwrap();
        for (a, b) in z.0.iter().zip([0.0, 1.0, 0.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn unnormalized_frames_rejected() {
        assert!(MeasurementFrame::new(1.0, 1.0, 0.0, 0.0).is_err());
        assert!(MeasurementFrame::normalized([0.0; 4]).is_err());
        let raw = MeasurementFrame {
            t: 2.0,
            y: [0.0; 3],
        };
        assert!(frame_to_bloch(&raw).is_err());
    }

    #[test]
    fn bloch_axis_matches_projector() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let f = MeasurementFrame::random(&mut rng);
            let z = frame_to_bloch(&f).unwrap();
            let p0 = f.projector(0);
            for (j, zj) in z.0.iter().enumerate() {
                let s = ComplexMatrix::pauli(j + 1).unwrap();
                let expectation = p0.matmul(&s).unwrap().trace();
                assert_abs_diff_eq!(expectation.re, *zj, epsilon = 1e-12);
            }
            // V is unitary.
            let v = f.unitary();
            let vv = v.matmul(&v.adjoint()).unwrap();
            assert!(vv.max_abs_diff(&ComplexMatrix::identity(2).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn family_outcomes_are_equiprobable() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for n in 2..=5 {
            let rho = family(n, [0.3, -0.2, 0.4]);
            for _ in 0..5 {
                let f = MeasurementFrame::random(&mut rng);
                let e = measure_qubit(&rho, 0, &f).unwrap();
                for b in &e.branches {
                    assert_abs_diff_eq!(b.probability, 0.5, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn zero_probability_branch_is_flagged() {
        let zero =
            DensityMatrix::pure(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        let rho = kron_states(&zero, &DensityMatrix::maximally_mixed(1).unwrap());
        let e = measure_qubit(&rho, 0, &MeasurementFrame::z_basis()).unwrap();
        assert_abs_diff_eq!(e.branches[0].probability, 1.0, epsilon = 1e-15);
        assert_eq!(e.branches[1].probability, 0.0);
        assert!(e.branches[1].negligible);
        assert!(DensityMatrix::new(e.branches[1].state.matrix().clone()).is_ok());
        assert!(measure_qubit(&rho, 2, &MeasurementFrame::z_basis()).is_err());
    }

    #[test]
    fn remeasurement_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho = family(3, [0.3, 0.2, 0.1]);
        let f = MeasurementFrame::random(&mut rng);
        for b in measure_qubit(&rho, 1, &f).unwrap().branches {
            let again = measure_qubit(&b.state, 1, &f).unwrap();
            let k = usize::from(b.history == "1");
            assert_abs_diff_eq!(again.branches[k].probability, 1.0, epsilon = 1e-12);
            assert!(
                again.branches[k]
                    .state
                    .matrix()
                    .max_abs_diff(b.state.matrix())
                    < 1e-12
            );
        }
    }

    #[test]
    fn tree_on_three_qubits() {
        let rho = family(3, [0.3, 0.2, 0.1]);
        let tree = MeasurementTree::uniform(3, MeasurementFrame::z_basis()).unwrap();
        let e = apply_tree(&rho, &tree).unwrap();
        assert_eq!(e.branches.len(), 4);
        let histories: Vec<_> = e.branches.iter().map(|b| b.history.as_str()).collect();
        assert_eq!(histories, ["00", "01", "10", "11"]);
        for b in &e.branches {
            assert_abs_diff_eq!(b.probability, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn degenerate_tree_is_single_measurement() {
        let rho = family(2, [0.5, 0.1, -0.2]);
        let f = MeasurementFrame::along_axis(0).unwrap();
        let a = apply_tree(&rho, &MeasurementTree::uniform(2, f).unwrap()).unwrap();
        let b = measure_qubit(&rho, 0, &f).unwrap();
        for (x, y) in a.branches.iter().zip(&b.branches) {
            assert_abs_diff_eq!(x.probability, y.probability, epsilon = 1e-15);
            assert!(x.state.matrix().max_abs_diff(y.state.matrix()) < 1e-15);
        }
    }

    #[test]
    fn measured_qubits_collapse_to_pure_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let rho = family(3, [0.3, -0.5, 0.2]);
            let tree = MeasurementTree::random(&mut rng, 3).unwrap();
            for b in apply_tree(&rho, &tree).unwrap().branches {
                let measured = partial_trace(&b.state, &[0, 1]).unwrap();
                assert_abs_diff_eq!(von_neumann_entropy(&measured).unwrap(), 0.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn tree_shape_errors() {
        let rho = family(3, [0.1, 0.1, 0.1]);
        let tree = MeasurementTree::uniform(4, MeasurementFrame::z_basis()).unwrap();
        assert!(apply_tree(&rho, &tree).is_err());
        assert!(MeasurementTree::new(vec![vec![MeasurementFrame::z_basis(); 2]]).is_err());
        assert!(MeasurementTree::new(vec![]).is_err());
    }

    #[test]
    fn conditional_terms_for_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let c = [0.3, 0.2, 0.1];
        let rho3 = family(3, c);
        for _ in 0..5 {
            let tree = MeasurementTree::random(&mut rng, 3).unwrap();
            let t = conditional_entropy_term(&rho3, &tree.truncated(1).unwrap(), 2).unwrap();
            assert_abs_diff_eq!(t, 1.0, epsilon = 1e-10);
        }
        let rho4 = family(4, [0.8, 0.4, 0.5]);
        for _ in 0..5 {
            let tree = MeasurementTree::random(&mut rng, 4).unwrap();
            let t = conditional_entropy_term(&rho4, &tree.truncated(2).unwrap(), 3).unwrap();
            assert_abs_diff_eq!(t, 1.0, epsilon = 1e-10);
        }
        let z = MeasurementTree::uniform(3, MeasurementFrame::z_basis()).unwrap();
        let t = conditional_entropy_term(&rho3, &z, 3).unwrap();
        assert_abs_diff_eq!(t, 1.0 - f_defect(0.1), epsilon = 1e-10);
        assert!(conditional_entropy_term(&rho3, &z, 1).is_err());
        assert!(conditional_entropy_term(&rho3, &z, 4).is_err());
    }

    #[test]
    fn unconditional_term_examples() {
        let xi = 0.14f64.sqrt();
        let t = unconditional_term(&family(3, [0.3, 0.2, 0.1])).unwrap();
        assert_abs_diff_eq!(t, f_defect(xi) - 2.0, epsilon = 1e-10);
        let t = unconditional_term(&DensityMatrix::maximally_mixed(3).unwrap()).unwrap();
        assert_abs_diff_eq!(t, -2.0, epsilon = 1e-12);
    }

    #[test]
    fn tree_json_shape() {
        let tree = MeasurementTree::uniform(3, MeasurementFrame::z_basis()).unwrap();
        let json = tree.to_json().unwrap();
        assert_eq!(
            json,
            r#"{"levels":[[[1.0,0.0,0.0,0.0]],[[1.0,0.0,0.0,0.0],[1.0,0.0,0.0,0.0]]]}"#
        );
        assert_eq!(MeasurementTree::from_json(&json).unwrap(), tree);
        assert!(MeasurementTree::from_json(r#"{"levels":[[[2.0,0.0,0.0,0.0]]]}"#).is_err());
        assert!(MeasurementTree::from_json(r#"{"levels":[[[1,0,0,0],[1,0,0,0]]]}"#).is_err());
    }

    #[test]
    fn flat_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let tree = MeasurementTree::random(&mut rng, 4).unwrap();
        let flat = tree.to_flat();
        assert_eq!(flat.len(), 28);
        let back = MeasurementTree::from_flat(4, &flat).unwrap();
        assert!(back
            .to_flat()
            .iter()
            .zip(&flat)
            .all(|(a, b)| (a - b).abs() < 1e-15));
        assert!(MeasurementTree::from_flat(4, &flat[1..]).is_err());
    }
}
