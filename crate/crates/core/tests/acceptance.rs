//! Acceptance criteria, one pass/fail line each. Run with
//! `cargo test -p qdiscord --test acceptance -- --nocapture` to see the table.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdiscord::dynamics::{
    apply_phase_flip, discord_trajectory, finite_difference_slopes, kraus_operators,
    phase_flip_coefficients, transition_point, uniform_grid,
};
use qdiscord::family::{build_density_matrix, is_physical, random_physical, spectrum_closed_form};
use qdiscord::linalg::{hermitian_eigenvalues, ComplexMatrix};
use qdiscord::surface::{extract_isosurface, sample_field};
use qdiscord::{
    closed_form_discord, entropy_defect, oracle_discord, FamilyCoefficients, OracleConfig,
};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn fc(n: usize, c: [f64; 3]) -> FamilyCoefficients {
    FamilyCoefficients::new(n, c[0], c[1], c[2]).unwrap()
}

fn discord(f: &FamilyCoefficients) -> f64 {
    closed_form_discord(f).unwrap().value_bits
}

/// Oracle gaps for `count` seeded random physical states.
fn oracle_gaps(n: usize, count: usize, restarts: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let f = random_physical(&mut rng, n).unwrap();
            let cfg = OracleConfig {
                restarts,
                seed: seed + i as u64,
                ..OracleConfig::default()
            };
            oracle_discord(&f, &cfg).unwrap().gap_to_closed_form
        })
        .collect()
}

fn gap_criterion(n: usize, count: usize, restarts: usize, lo: f64, hi: f64) -> Outcome {
    let gaps = oracle_gaps(n, count, restarts, 1000 + n as u64);
    let min = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let max = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    check(
        gaps.len() == count && min >= lo && max <= hi,
        format!("N={n}: {count} states x {restarts} restarts, gaps in [{min:.3e}, {max:.3e}], allowed [{lo:e}, {hi:e}]"),
    )
}

fn criterion_1() -> Outcome {
    gap_criterion(3, 50, 400, -1e-9, 5e-4)
}

fn criterion_2() -> Outcome {
    gap_criterion(4, 20, 400, -1e-9, 1e-3)
}

fn criterion_3() -> Outcome {
    gap_criterion(5, 5, 200, -1e-9, 2e-3)
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let mut ok = true;
    for n in 2..=6 {
        for _ in 0..200 {
            let f = random_physical(&mut rng, n).unwrap();
            let numeric =
                hermitian_eigenvalues(build_density_matrix(&f).unwrap().matrix()).unwrap();
            let mut closed = spectrum_closed_form(&f).expanded();
            closed.sort_by(f64::total_cmp);
            ok &= numeric.len() == closed.len();
            for (a, b) in numeric.iter().zip(&closed) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    check(
        ok && worst <= 1e-10,
        format!("1000 states, N=2..6, max eigenvalue error {worst:.3e} (tol 1e-10)"),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut channel_err = 0.0f64;
    let mut completeness_err = 0.0f64;
    for n in [3, 4] {
        let id = ComplexMatrix::identity(1 << n).unwrap();
        for _ in 0..20 {
            let f = random_physical(&mut rng, n).unwrap();
            let p: f64 = rng.random_range(0.0..=1.0);
            let kraus = apply_phase_flip(&build_density_matrix(&f).unwrap(), p).unwrap();
            let scaled = build_density_matrix(&phase_flip_coefficients(&f, p).unwrap()).unwrap();
            channel_err = channel_err.max(kraus.matrix().max_abs_diff(scaled.matrix()));
            for pair in kraus_operators(n, p).unwrap().chunks_exact(2) {
                let sum = pair[0]
                    .adjoint()
                    .matmul(&pair[0])
                    .unwrap()
                    .add(&pair[1].adjoint().matmul(&pair[1]).unwrap())
                    .unwrap();
                completeness_err = completeness_err.max(sum.max_abs_diff(&id));
            }
        }
    }
    check(
        channel_err <= 1e-10 && completeness_err <= 1e-12,
        format!("N=3,4 x 20 pairs: channel error {channel_err:.3e} (tol 1e-10), completeness error {completeness_err:.3e} (tol 1e-12)"),
    )
}

fn criterion_6() -> Outcome {
    let t = transition_point(&fc(4, [0.8, 0.4, 0.5])).unwrap();
    let off = (t.analytic - 0.11086).abs();
    let agree = (t.analytic - t.bisection).abs();
    check(
        off <= 5e-5 && agree <= 1e-8,
        format!("p* analytic {:.8}, bisection {:.8}; |p*-0.11086| = {off:.2e} (tol 5e-5), methods differ by {agree:.2e} (tol 1e-8)", t.analytic, t.bisection),
    )
}

fn criterion_7() -> Outcome {
    let f = fc(4, [0.8, 0.4, 0.5]);
    let plateau = entropy_defect(0.5).unwrap();
    let pts = discord_trajectory(&f, &[0.0, 0.05, 0.10, 0.2]).unwrap();
    let d: Vec<f64> = pts.iter().map(|p| p.discord_bits.unwrap()).collect();
    let worst = d[..3]
        .iter()
        .map(|x| (x - plateau).abs())
        .fold(0.0, f64::max);
    let quoted = (plateau - 0.1887219).abs();
    check(
        worst <= 1e-9 && d[3] < plateau && quoted <= 5e-8,
        format!("f(0.5) = {plateau:.10}; plateau deviation {worst:.2e} (tol 1e-9); D(0.2) = {:.10} < plateau", d[3]),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let grid = uniform_grid(200).unwrap();
    let mut states = 0;
    let mut max_slope = f64::NEG_INFINITY;
    while states < 20 {
        let f = random_physical(&mut rng, 3).unwrap();
        if discord(&f) <= 1e-6 {
            continue;
        }
        states += 1;
        let pts = discord_trajectory(&f, &grid).unwrap();
        for (_, s) in finite_difference_slopes(&pts).unwrap() {
            max_slope = max_slope.max(s);
        }
    }
    check(
        max_slope < 0.0,
        format!("20 states x 199 interior points, largest slope {max_slope:.3e} (must be < 0)"),
    )
}

fn criterion_9() -> Outcome {
    let r = 21;
    let h = ((r - 1) / 2) as f64;
    let mut worst = 0.0f64;
    let mut compared = [0usize; 2];
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let c = [i, j, k].map(|x| (x as f64 - h) / h);
                for (slot, (a, b)) in [(3, 5), (2, 6)].into_iter().enumerate() {
                    let (fa, fb) = (fc(a, c), fc(b, c));
                    if is_physical(&fa) {
                        worst = worst.max((discord(&fa) - discord(&fb)).abs());
                        compared[slot] += 1;
                    }
                }
            }
        }
    }
    check(
        worst <= 1e-15 && compared.iter().all(|&c| c > 0),
        format!(
            "{} odd and {} even grid points, max difference {worst:.2e} (tol 1e-15)",
            compared[0], compared[1]
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut worst = 0.0f64;
    worst = worst.max((discord(&fc(4, [1.0, 1.0, 1.0])) - 1.0).abs());
    worst = worst.max((discord(&fc(2, [1.0, -1.0, 1.0])) - 1.0).abs());
    for n in 2..=8 {
        worst = worst.max(discord(&fc(n, [0.0; 3])).abs());
        for axis in 0..3 {
            for v in [-1.0, -0.75, -0.5, -0.25, 0.25, 0.5, 0.75, 1.0] {
                let mut c = [0.0; 3];
                c[axis] = v;
                worst = worst.max(discord(&fc(n, c)).abs());
            }
        }
    }
    check(worst <= 1e-12, format!("GHZ/Bell corners = 1, single-axis and zero states = 0, max error {worst:.2e} (tol 1e-12)"))
}

fn criterion_11() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [2, 3, 4] {
        let field = sample_field(n, 61).unwrap();
        for level in [0.03, 0.15, 0.55] {
            let mesh = extract_isosurface(&field, level).unwrap();
            let mut note = format!("N={n} L={level}: {} tris", mesh.triangles.len());
            if level < 0.5 && mesh.is_empty() {
                ok = false;
                note += " EMPTY";
            }
            if n % 2 == 1 {
                let defect = mesh.central_symmetry_defect();
                ok &= defect <= 1e-9;
                note += &format!(", sym {defect:.1e}");
            }
            if level == 0.55 {
                let min = mesh
                    .vertices
                    .iter()
                    .map(|v| v.iter().fold(0.0f64, |m, x| m.max(x.abs())))
                    .fold(f64::INFINITY, f64::min);
                ok &= mesh.is_empty() || min >= 0.5;
                note += &format!(", min max-norm {min:.3}");
            }
            parts.push(note);
        }
    }
    check(ok, parts.join("; "))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("oracle vs closed form, N=3", criterion_1),
        ("oracle vs closed form, N=4", criterion_2),
        ("oracle spot check, N=5", criterion_3),
        ("closed-form spectra", criterion_4),
        ("channel equivalence", criterion_5),
        ("transition point", criterion_6),
        ("frozen plateau", criterion_7),
        ("odd-N no freezing", criterion_8),
        ("category equivalences", criterion_9),
        ("corner values", criterion_10),
        ("level surfaces", criterion_11),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} [{verdict}] {name} ({:.1}s): {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            out.detail
        );
        if !out.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
