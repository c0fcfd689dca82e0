//! `qdiscord`: closed-form and brute-force discord for the symmetric N-qubit
//! family, phase-flip trajectories and level-surface export.
//!
//! Output is line-oriented `key: value`. Exit codes: 0 success, 1 parse
//! error, 2 domain or physicality error, 3 unsupported size, 4 I/O error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qdiscord::discord::MAX_ORACLE_QUBITS;
use qdiscord::dynamics::{discord_trajectory, trajectory_csv, transition_point, uniform_grid};
use qdiscord::family::{random_physical, spectrum_closed_form};
use qdiscord::numfmt::{sci17, sig};
use qdiscord::surface::{
    export_mesh, extract_isosurface, sample_field, MeshFormat, DEFAULT_RESOLUTION,
};
use qdiscord::{closed_form_discord, oracle_discord, Error, FamilyCoefficients, OracleConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DIGITS: usize = 12;

#[derive(Parser)]
#[command(
    name = "qdiscord",
    version,
    about = "Multipartite quantum discord for the symmetric N-qubit family"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form discord of a state given as `N:c1,c2,c3`
    Compute { state: String },
    /// Minimize the discord objective over measurement trees
    Oracle {
        state: String,
        #[arg(long, default_value_t = 400)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Write the best measurement tree as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare closed form and oracle on random physical states
    Validate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Oracle restarts per sample (default 400, 200 for five qubits)
        #[arg(long)]
        restarts: Option<usize>,
        /// Per-sample CSV
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Discord along the phase-flip channel, p from 0 to 1
    Dynamics {
        state: String,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Trajectory CSV; printed to stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// End of the frozen-discord plateau
    Transition { state: String },
    /// Export a constant-discord surface
    Surface {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        level: f64,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long, value_enum, default_value_t = Format::Obj)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Obj,
    Csv,
}

impl From<Format> for MeshFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Obj => MeshFormat::Obj,
            Format::Csv => MeshFormat::Csv,
        }
    }
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) => 1,
            Error::InvalidArgument(_) | Error::InvalidState { .. } => 2,
            Error::UnsupportedSize { .. } => 3,
            Error::Io(_) | Error::Json(_) => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail<T>(code: u8, message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure {
        code,
        message: message.into(),
    })
}

type Output = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Output {
    match cmd {
        Command::Compute { state } => compute(&state),
        Command::Oracle {
            state,
            restarts,
            seed,
            max_iters,
            tol,
            out,
        } => oracle(
            &state,
            OracleConfig {
                restarts,
                seed,
                max_iters,
                tol,
            },
            out.as_deref(),
        ),
        Command::Validate {
            n,
            samples,
            seed,
            restarts,
            out,
        } => validate(n, samples, seed, restarts, out.as_deref()),
        Command::Dynamics { state, steps, out } => dynamics(&state, steps, out.as_deref()),
        Command::Transition { state } => transition(&state),
        Command::Surface {
            n,
            level,
            resolution,
            format,
            out,
        } => surface(n, level, resolution, format.into(), &out),
    }
}

fn parse_state(s: &str) -> Result<FamilyCoefficients, Failure> {
    Ok(s.parse::<FamilyCoefficients>()?)
}

fn line(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key}: {value}");
}

fn compute(state: &str) -> Output {
    let fc = parse_state(state)?;
    let report = closed_form_discord(&fc)?;
    let mut out = String::new();
    line(&mut out, "state", fc);
    line(&mut out, "category", report.category);
    line(&mut out, "xi", sig(report.xi, DIGITS));
    line(&mut out, "c_max", sig(report.c_max, DIGITS));
    line(
        &mut out,
        "optimal_axis",
        ["x", "y", "z"][report.optimal_axis],
    );
    line(&mut out, "physical", true);
    line(
        &mut out,
        "min_eigenvalue",
        sig(spectrum_closed_form(&fc).min_eigenvalue(), DIGITS),
    );
    line(&mut out, "discord", sig(report.value_bits, DIGITS));
    Ok(out)
}

fn oracle(state: &str, cfg: OracleConfig, tree_out: Option<&Path>) -> Output {
    let fc = parse_state(state)?;
    let r = oracle_discord(&fc, &cfg)?;
    let mut out = String::new();
    line(&mut out, "state", fc);
    line(&mut out, "oracle_discord", sig(r.value_bits, DIGITS));
    line(
        &mut out,
        "closed_form_discord",
        sig(r.closed_form_bits, DIGITS),
    );
    line(&mut out, "gap", sig(r.gap_to_closed_form, DIGITS));
    line(&mut out, "restarts", r.restart_count);
    line(&mut out, "best_restart", r.best_restart);
    line(&mut out, "objective_evaluations", r.objective_evaluations);
    line(&mut out, "seed", cfg.seed);
    if let Some(path) = tree_out {
        fs::write(path, r.best_tree.to_json()? + "\n").map_err(Error::from)?;
        line(&mut out, "tree", path.display());
    }
    Ok(out)
}

/// Largest accepted oracle gap per register size.
fn gap_threshold(n: usize) -> f64 {
    match n {
        0..=3 => 5e-4,
        4 => 1e-3,
        _ => 2e-3,
    }
}

const GAP_FLOOR: f64 = -1e-9;

fn validate(
    n: usize,
    samples: usize,
    seed: u64,
    restarts: Option<usize>,
    csv_out: Option<&Path>,
) -> Output {
    if samples == 0 {
        return fail(1, "--samples must be at least 1");
    }
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::UnsupportedSize {
            num_qubits: n,
            max: MAX_ORACLE_QUBITS,
        }
        .into());
    }
    let restarts = restarts.unwrap_or(if n >= 5 { 200 } else { 400 });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut csv = String::from("sample,c1,c2,c3,closed_form,oracle,gap\n");
    let mut gaps = Vec::with_capacity(samples);
    for i in 0..samples {
        let fc = random_physical(&mut rng, n)?;
        let cfg = OracleConfig {
            restarts,
            seed: seed.wrapping_add(i as u64),
            ..OracleConfig::default()
        };
        let r = oracle_discord(&fc, &cfg)?;
        let [c1, c2, c3] = fc.coefficients();
        let _ = writeln!(
            csv,
            "{i},{},{},{},{},{},{}",
            sci17(c1),
            sci17(c2),
            sci17(c3),
            sci17(r.closed_form_bits),
            sci17(r.value_bits),
            sci17(r.gap_to_closed_form)
        );
        gaps.push(r.gap_to_closed_form);
    }
    if let Some(path) = csv_out {
        fs::write(path, csv).map_err(Error::from)?;
    }
    let max = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let threshold = gap_threshold(n);
    let pass = min >= GAP_FLOOR && max <= threshold;

    let mut out = String::new();
    line(&mut out, "num_qubits", n);
    line(&mut out, "samples", samples);
    line(&mut out, "restarts", restarts);
    line(&mut out, "seed", seed);
    line(&mut out, "max_gap", sig(max, DIGITS));
    line(&mut out, "mean_gap", sig(mean, DIGITS));
    line(&mut out, "min_gap", sig(min, DIGITS));
    line(&mut out, "threshold", sig(threshold, DIGITS));
    line(&mut out, "pass", pass);
    if let Some(path) = csv_out {
        line(&mut out, "csv", path.display());
    }
    if pass {
        Ok(out)
    } else {
        print!("{out}");
        fail(2, format!("gaps outside [{GAP_FLOOR:e}, {threshold:e}]"))
    }
}

fn dynamics(state: &str, steps: usize, csv_out: Option<&Path>) -> Output {
    let fc = parse_state(state)?;
    let points = discord_trajectory(&fc, &uniform_grid(steps)?)?;
    let csv = trajectory_csv(&points);
    let Some(path) = csv_out else {
        return Ok(csv);
    };
    fs::write(path, csv).map_err(Error::from)?;
    let mut out = String::new();
    line(&mut out, "state", fc);
    line(&mut out, "rows", points.len());
    line(
        &mut out,
        "physical_rows",
        points.iter().filter(|p| p.physical).count(),
    );
    if let Some(first) = points.iter().find(|p| p.physical) {
        line(&mut out, "first_physical_p", sig(first.p, DIGITS));
        line(
            &mut out,
            "initial_discord",
            sig(first.discord_bits.unwrap_or(f64::NAN), DIGITS),
        );
    }
    line(&mut out, "csv", path.display());
    Ok(out)
}

fn transition(state: &str) -> Output {
    let fc = parse_state(state)?;
    let t = transition_point(&fc)?;
    let mut out = String::new();
    line(&mut out, "state", fc);
    line(&mut out, "p_star", format!("{:.6}", t.analytic));
    line(&mut out, "analytic", format!("{:.6}", t.analytic));
    line(&mut out, "bisection", format!("{:.6}", t.bisection));
    line(
        &mut out,
        "difference",
        sig((t.analytic - t.bisection).abs(), 3),
    );
    Ok(out)
}

fn surface(n: usize, level: f64, resolution: usize, format: MeshFormat, path: &Path) -> Output {
    if level.is_nan() || level <= 0.0 {
        return fail(2, format!("--level must be positive, got {level}"));
    }
    let field = sample_field(n, resolution)?;
    let mesh = extract_isosurface(&field, level)?;
    export_mesh(&mesh, format, path)?;
    if mesh.is_empty() {
        let max = field.max_value().unwrap_or(0.0);
        eprintln!(
            "warning: empty mesh; level {level} not crossed (field maximum {})",
            sig(max, DIGITS)
        );
    }
    let mut out = String::new();
    line(&mut out, "num_qubits", n);
    line(&mut out, "level", sig(level, DIGITS));
    line(&mut out, "resolution", resolution);
    line(&mut out, "vertices", mesh.vertices.len());
    line(&mut out, "triangles", mesh.triangles.len());
    line(&mut out, "area", sig(mesh.area(), DIGITS));
    if n % 2 == 1 {
        line(
            &mut out,
            "symmetry_defect",
            sig(mesh.central_symmetry_defect(), 3),
        );
    }
    line(&mut out, "output", path.display());
    Ok(out)
}
