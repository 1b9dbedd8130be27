//! `cone-moduli` command-line front end.
//!
//! Exit codes: 0 success, 2 input or usage error, 3 degeneration,
//! 4 numerical failure (including a failed curvature-sign verification).

// Negated comparisons reject NaN together with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod report;
mod table;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cone_moduli::continuation::{
    continue_to_angles, solve_complete_multistart, sweep, AngleMode, ConeTarget, ContinuationOptions, ExtendedAck,
    OrientationPolicy, PathStatus, SweepMode, EXTENDED_MODE_NOTICE, STANDARD_MAX_ANGLE,
};
use cone_moduli::metriclab::{
    build_cusp_flattening, cone_smoothing, fermi_euclidean, fermi_hyperbolic, verify_profile, SignRequirement,
    WarpedMetricProfile,
};
use cone_moduli::{lobachevsky, load, nu, volume_report, Error, GluingSystem, ShapeAssignment};

const EXIT_USAGE: u8 = 2;
const EXIT_DEGENERATED: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "cone-moduli", version, about = "Hyperbolic cone structures on link complements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for the complete hyperbolic structure.
    Complete {
        /// Census name (figure8, whitehead) or path to a triangulation JSON file.
        input: String,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long)]
        json: bool,
    },
    /// Continue from the complete structure to prescribed cone angles.
    Cone {
        input: String,
        /// Cone angles in radians, one per cusp (a single value applies to all).
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        angles: Vec<f64>,
        #[command(flatten)]
        ray: RayArgs,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long)]
        json: bool,
    },
    /// Sweep cone angles along a ray and write CSV.
    Sweep {
        input: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        /// Number of grid points (at least 2).
        #[arg(long)]
        steps: usize,
        /// Per-cusp multipliers: cusp j gets angle s·direction_j.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        direction: Option<Vec<f64>>,
        /// Continue every grid point independently on this many threads
        /// instead of warm-starting from the previous point.
        #[arg(long)]
        jobs: Option<usize>,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        ray: RayArgs,
        #[command(flatten)]
        solve: SolveArgs,
        /// Emit JSON rows instead of CSV.
        #[arg(long)]
        json: bool,
    },
    /// Check the curvature sign of a warped-product metric construction.
    VerifyMetric {
        kind: MetricKind,
        #[arg(long, default_value_t = PI)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        z0: f64,
        /// Top of the cusp domain (default 20·z0).
        #[arg(long)]
        zfar: Option<f64>,
        /// Radial extent for the Fermi models.
        #[arg(long, default_value_t = 3.0)]
        radius: f64,
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
        /// Required sign (defaults to the sign the construction is meant to have).
        #[arg(long)]
        sign: Option<SignArg>,
        #[arg(long)]
        json: bool,
    },
    /// Print the regular ideal tetrahedron volume.
    Nu {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Seed for the random restarts of the complete-structure solve.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    attempts: usize,
}

#[derive(Args, Debug)]
struct RayArgs {
    /// Trace signs ε_j ∈ {+1, −1}, one per cusp.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    signs: Option<Vec<f64>>,
    /// Meridian orientations ±1: the root chosen when leaving the complete structure.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    orientation: Option<Vec<f64>>,
    /// Accept angles up to π (the caller vouches for the hypotheses).
    #[arg(long)]
    extended: bool,
    #[arg(long, default_value_t = 1e-12)]
    corrector_tol: f64,
    /// Volume and shape floors that count as degeneration.
    #[arg(long, default_value_t = 1e-6)]
    degeneracy_floor: f64,
    /// Stop as soon as some tetrahedron has Im z below the degeneracy floor.
    #[arg(long)]
    strict_orientation: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MetricKind {
    FermiHyp,
    FermiEuc,
    ConeSmoothing,
    CuspFlatten,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SignArg {
    Nonneg,
    Nonpos,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Format(_)
            | Error::Combinatorics(_)
            | Error::InvalidArgument(_)
            | Error::AngleOutOfRange { .. }
            | Error::IdentityInput
            | Error::KnotPoint { .. }
            | Error::InfeasibleSmoothing { .. } => EXIT_USAGE,
            Error::NoConvergence { .. } | Error::NonGeometric { .. } | Error::DegenerateShape { .. } => {
                EXIT_NUMERICAL
            }
        };
        Self { code, message: e.to_string() }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Complete { input, solve, json } => cmd_complete(&input, &solve, json),
        Command::Cone { input, angles, ray, solve, json } => cmd_cone(&input, &angles, &ray, &solve, json),
        Command::Sweep { input, from, to, steps, direction, jobs, out, ray, solve, json } => {
            cmd_sweep(&input, from, to, steps, direction, jobs, out, &ray, &solve, json)
        }
        Command::VerifyMetric { kind, alpha, eps, z0, zfar, radius, grid, sign, json } => {
            cmd_verify_metric(kind, alpha, eps, z0, zfar, radius, grid, sign, json)
        }
        Command::Nu { json } => cmd_nu(json),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn complete_structure(input: &str, solve: &SolveArgs) -> Result<(GluingSystem, ShapeAssignment), Failure> {
    let tri = load(input)?;
    let system = tri.assemble();
    let shapes = solve_complete_multistart(&system, solve.seed, solve.attempts)?;
    Ok((system, shapes))
}

fn cmd_complete(input: &str, solve: &SolveArgs, json: bool) -> CmdResult {
    let (system, shapes) = complete_structure(input, solve)?;
    let m = system.num_cusps();
    let residuals = system.residual(&shapes, &vec![Default::default(); m])?;
    let volume = volume_report(&system, &shapes)?;
    let corank = system.edge_corank(&shapes, 1e6)?;
    let rep = report::CompleteReport::new(input, &shapes, &residuals, &volume, &corank, m);
    if json {
        report::print_json(&rep);
    } else {
        rep.print_text();
    }
    Ok(0)
}

fn ray_options(ray: &RayArgs) -> Result<ContinuationOptions, Failure> {
    if !(ray.corrector_tol > 0.0) || !(ray.degeneracy_floor > 0.0) {
        return Err(Failure::usage("tolerances must be positive"));
    }
    let mut opts = ContinuationOptions {
        corrector_tol: ray.corrector_tol,
        volume_floor: ray.degeneracy_floor,
        shape_floor: ray.degeneracy_floor,
        ..ContinuationOptions::default()
    };
    if ray.strict_orientation {
        opts.orientation = OrientationPolicy::Strict { floor: ray.degeneracy_floor };
    }
    Ok(opts)
}

fn angle_mode(ray: &RayArgs) -> AngleMode {
    if ray.extended {
        eprintln!("note: {EXTENDED_MODE_NOTICE}");
        AngleMode::Extended(ExtendedAck::acknowledge())
    } else {
        AngleMode::Standard
    }
}

fn per_cusp(values: Option<&[f64]>, m: usize, what: &str) -> Result<Vec<f64>, Failure> {
    match values {
        None => Ok(vec![1.0; m]),
        Some([v]) => Ok(vec![*v; m]),
        Some(v) if v.len() == m => Ok(v.to_vec()),
        Some(v) => Err(Failure::usage(format!("expected {m} {what} values, got {}", v.len()))),
    }
}

fn cmd_cone(input: &str, angles: &[f64], ray: &RayArgs, solve: &SolveArgs, json: bool) -> CmdResult {
    let tri = load(input)?;
    let m = tri.num_cusps();
    let theta = per_cusp(Some(angles), m, "angle")?;
    let target = ConeTarget::with_mode(theta, angle_mode(ray))?
        .with_signs(per_cusp(ray.signs.as_deref(), m, "sign")?)?
        .with_orientation(per_cusp(ray.orientation.as_deref(), m, "orientation")?)?;
    let opts = ray_options(ray)?;
    let (system, complete) = complete_structure(input, solve)?;
    let path = continue_to_angles(&system, &complete, &target, &opts)?;
    let rep = report::ConeReport::new(input, &target, &path);
    if json {
        report::print_json(&rep);
    } else {
        rep.print_text();
    }
    Ok(match path.status {
        PathStatus::Completed => 0,
        PathStatus::Degenerated(_) => EXIT_DEGENERATED,
        PathStatus::StepLimit { .. } => EXIT_NUMERICAL,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    input: &str,
    from: f64,
    to: f64,
    steps: usize,
    direction: Option<Vec<f64>>,
    jobs: Option<usize>,
    out: Option<PathBuf>,
    ray: &RayArgs,
    solve: &SolveArgs,
    json: bool,
) -> CmdResult {
    if steps < 2 {
        return Err(Failure::usage("--steps must be at least 2"));
    }
    let mode = angle_mode(ray);
    let tri = load(input)?;
    let m = tri.num_cusps();
    let direction = per_cusp(direction.as_deref(), m, "direction")?;
    let reach = direction.iter().fold(0.0f64, |a, d| a.max(d.abs()));
    let max = match mode {
        AngleMode::Standard => STANDARD_MAX_ANGLE,
        AngleMode::Extended(_) => PI,
    };
    if !(from > 0.0 && from < to && to * reach <= max) || direction.iter().any(|d| !(*d > 0.0)) {
        return Err(Failure::usage(format!(
            "need 0 < from < to with every angle at most {max:.6} and positive direction entries"
        )));
    }
    let signs = per_cusp(ray.signs.as_deref(), m, "sign")?;
    let opts = ray_options(ray)?;
    let grid: Vec<f64> = (0..steps).map(|i| from + (to - from) * i as f64 / (steps - 1) as f64).collect();
    let sweep_mode = match jobs {
        Some(jobs) => SweepMode::Independent { jobs },
        None => SweepMode::WarmStart,
    };
    let (system, complete) = complete_structure(input, solve)?;
    let rows = sweep(&system, &complete, &grid, &direction, &signs, mode, &opts, sweep_mode)?;
    let text = if json {
        let mut s = serde_json::to_string_pretty(&report::sweep_json(&rows)).expect("rows serialize");
        s.push('\n');
        s
    } else {
        table::render(&rows, m)
    };
    match out {
        Some(path) => table::write_atomic(&path, &text).map_err(|e| Failure {
            code: EXIT_USAGE,
            message: format!("cannot write {}: {e}", path.display()),
        })?,
        None => print!("{text}"),
    }
    let incomplete = rows.iter().filter(|r| r.status != cone_moduli::continuation::RowStatus::Completed).count();
    if incomplete > 0 {
        eprintln!("{incomplete} of {} rows did not complete (see status column)", rows.len());
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify_metric(
    kind: MetricKind,
    alpha: f64,
    eps: f64,
    z0: f64,
    zfar: Option<f64>,
    radius: f64,
    grid: usize,
    sign: Option<SignArg>,
    json: bool,
) -> CmdResult {
    let (profile, default_sign, extra): (WarpedMetricProfile, SignRequirement, Option<String>) = match kind {
        MetricKind::FermiHyp => (fermi_hyperbolic(alpha, 0.0, radius)?, SignRequirement::NonPositive, None),
        MetricKind::FermiEuc => (fermi_euclidean(alpha, 0.0, radius)?, SignRequirement::NonNegative, None),
        MetricKind::ConeSmoothing => {
            let s = cone_smoothing(alpha, eps)?;
            let note = format!("round part up to r = {:.6e}, concavity margin {:.6e}", s.delta, s.concavity_margin);
            (s.profile, SignRequirement::NonNegative, Some(note))
        }
        MetricKind::CuspFlatten => {
            let p = build_cusp_flattening(z0, zfar.unwrap_or(20.0 * z0))?;
            let tail = p.curvature_at(0.5 * (4.0 * z0 + p.domain.1))?;
            let note = format!("flat tail above z = {}: {:?}", 4.0 * z0, tail.as_array());
            (p, SignRequirement::NonPositive, Some(note))
        }
    };
    let sign = match sign {
        Some(SignArg::Nonneg) => SignRequirement::NonNegative,
        Some(SignArg::Nonpos) => SignRequirement::NonPositive,
        None => default_sign,
    };
    let rep = verify_profile(&profile, sign, grid)?;
    if json {
        report::print_json(&serde_json::json!({ "kind": format!("{kind:?}"), "report": rep, "note": extra }));
    } else {
        println!("kind: {kind:?}");
        println!("domain: [{}, {}]", profile.domain.0, profile.domain.1);
        if let Some(note) = &extra {
            println!("{note}");
        }
        println!("points evaluated: {}", rep.points);
        println!("min curvature entry: {:.12e} at {:.6}", rep.min_entry, rep.min_at);
        println!("max curvature entry: {:.12e} at {:.6}", rep.max_entry, rep.max_at);
        println!("{:?} (tol {:e}): {}", rep.sign, rep.tol, if rep.passed { "pass" } else { "FAIL" });
    }
    Ok(if rep.passed { 0 } else { EXIT_NUMERICAL })
}

fn cmd_nu(json: bool) -> CmdResult {
    let value = nu();
    let delta = (value - 3.0 * lobachevsky(PI / 3.0)).abs();
    if json {
        report::print_json(&serde_json::json!({ "nu": value, "cross_check_delta": delta }));
    } else {
        println!("nu = {value:.12}");
        println!("|nu - 3*Lambda(pi/3)| = {delta:.3e}");
    }
    Ok(0)
}
