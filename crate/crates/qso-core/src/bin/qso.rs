//! Command-line interface to the dynamics toolkit.
//!
//! Subcommands: `simulate` iterates the quadratic map to convergence,
//! `predict` produces the closed-form trajectory limit, `spectrum` and
//! `fixed-points` inspect the fiber matrix at the scenario's initial state,
//! `cubic` prints the interaction table, and `verify` runs the
//! cross-verification battery (a built-in suite unless a file is given).
//!
//! Exit codes: 0 success, 1 bad input, 2 a verification check failed,
//! 3 the spectral machinery refused (`predict` also writes a refusal
//! report in that case).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::exit;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qso_core::harness::{builtin_suite, run_suite, VerifyConfig, VerifyReport, DEFAULT_SUITE_SEED};
use qso_core::scenario::{load_scenarios, Scenario};
use qso_core::tol::{DEFAULT_CONV_TOL, DEFAULT_MAX_ITERS};
use qso_core::{
    analyze_on_fiber_of, apply_w, build_cubic_matrix, fiber_of, fixed_points_on_fiber,
    linkage_disequilibrium, predict_limit, simulate_to_convergence, FixedPointSet,
    LimitPrediction, QsoError, SimplexPoint, Spectrum,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Pretty-printed JSON (deterministic for a given scenario and seed).
    Json,
    /// Flat CSV rows.
    Csv,
}

#[derive(Parser)]
#[command(
    name = "qso",
    version,
    about = "Simulate and analyze a many-locus quadratic dynamics in closed form"
)]
struct Cli {
    /// Scenario file: JSON, a single object or an array (see the README).
    #[arg(long, global = true, value_name = "FILE")]
    scenario: Option<PathBuf>,

    /// Write the output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for the generated verification suite.
    #[arg(long, global = true, default_value_t = DEFAULT_SUITE_SEED)]
    seed: u64,

    /// Iteration cap for simulation and verification.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ITERS)]
    max_iters: u64,

    /// Convergence tolerance: sup-norm of the one-step change.
    #[arg(long, global = true, default_value_t = DEFAULT_CONV_TOL)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate the dynamics until the one-step change drops below --tol.
    ///
    /// JSON reports the converged state; CSV writes the whole trajectory,
    /// one row per generation.
    Simulate,
    /// Compute the trajectory limit in closed form via the fiber matrix.
    ///
    /// When no closed form exists (frozen loci, non-simple eigenvalue 1)
    /// a refusal report is written and the exit code is 3.
    Predict,
    /// Eigenvalues of the fiber matrix at the initial state (unreduced:
    /// zero-mass loci keep their rows).
    Spectrum,
    /// Fixed points on the initial state's fiber, via the kernel of H_c.
    ///
    /// CSV lists the kernel basis vectors.
    FixedPoints,
    /// The cubic interaction table for the scenario's coefficients.
    Cubic,
    /// Cross-verify the nonlinear iteration against the linear and spectral
    /// routes over a scenario suite.
    ///
    /// With --scenario the suite is read from the file; otherwise a
    /// deterministic built-in suite is generated from --seed.  Exit code 2
    /// when any check fails.
    Verify,
}

#[derive(Serialize)]
struct SimulateOutput<'a> {
    scenario: &'a str,
    m: usize,
    iterations: u64,
    converged: bool,
    ld_sup: f64,
    final_state: SimplexPoint,
}

#[derive(Serialize)]
struct PredictOutput<'a> {
    scenario: &'a str,
    prediction: LimitPrediction,
}

#[derive(Serialize)]
struct RefusalReport<'a> {
    scenario: &'a str,
    refused: bool,
    kind: &'static str,
    message: String,
}

#[derive(Serialize)]
struct SpectrumOutput<'a> {
    scenario: &'a str,
    spectrum: Spectrum,
}

#[derive(Serialize)]
struct FixedPointsOutput<'a> {
    scenario: &'a str,
    fixed_points: FixedPointSet,
}

#[derive(Serialize)]
struct CubicOutput<'a> {
    scenario: &'a str,
    m: usize,
    n: usize,
    levels: Vec<Vec<Vec<f64>>>,
}

#[derive(Serialize)]
struct VerifyOutput {
    source: String,
    seed: Option<u64>,
    suite_size: usize,
    config: VerifyConfig,
    report: VerifyReport,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let wants_zero = matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            );
            let _ = e.print();
            exit(if wants_zero { 0 } else { 1 });
        }
    };
    match run(&cli) {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            exit(if e.is_input_error() { 1 } else { 3 });
        }
    }
}

fn run(cli: &Cli) -> Result<i32, QsoError> {
    match cli.command {
        Command::Simulate => simulate(cli),
        Command::Predict => predict(cli),
        Command::Spectrum => spectrum(cli),
        Command::FixedPoints => fixed_points(cli),
        Command::Cubic => cubic(cli),
        Command::Verify => verify(cli),
    }
}

/// Load the scenario file, insisting on exactly one scenario.
fn single_scenario(cli: &Cli) -> Result<Scenario, QsoError> {
    let path = cli.scenario.as_ref().ok_or_else(|| {
        QsoError::InvalidScenario("--scenario <FILE> is required for this subcommand".into())
    })?;
    let mut found = load_scenarios(path)?;
    if found.len() != 1 {
        return Err(QsoError::InvalidScenario(format!(
            "expected a single scenario, found {}",
            found.len()
        )));
    }
    Ok(found.remove(0))
}

/// Write `text` to --out, or stdout when no --out was given.
fn emit(cli: &Cli, text: &str) -> Result<(), QsoError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            QsoError::InvalidScenario(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types always serialize");
    s.push('\n');
    s
}

fn sup_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

fn simulate(cli: &Cli) -> Result<i32, QsoError> {
    let scenario = single_scenario(cli)?;
    let (a, x0) = scenario.build()?;
    match cli.format {
        Format::Json => {
            let (final_state, iterations, converged) =
                simulate_to_convergence(&a, &x0, cli.max_iters, cli.tol)?;
            let ld_sup = sup_abs(&linkage_disequilibrium(&a, &final_state)?);
            let out = SimulateOutput {
                scenario: scenario.label(),
                m: a.m(),
                iterations,
                converged,
                ld_sup,
                final_state,
            };
            emit(cli, &to_json(&out))?;
        }
        Format::Csv => {
            let mut text = String::from("iteration");
            for slot in 1..=2 * a.m() {
                let _ = write!(text, ",x{slot}");
            }
            text.push_str(",ld_sup\n");
            let mut x = x0;
            let mut n = 0u64;
            loop {
                let sup = sup_abs(&linkage_disequilibrium(&a, &x)?);
                let _ = write!(text, "{n}");
                for &v in x.coords() {
                    let _ = write!(text, ",{v}");
                }
                let _ = writeln!(text, ",{sup}");
                if sup < cli.tol || n >= cli.max_iters {
                    break;
                }
                x = apply_w(&a, &x)?;
                n += 1;
            }
            emit(cli, &text)?;
        }
    }
    Ok(0)
}

fn refusal_kind(e: &QsoError) -> &'static str {
    match e {
        QsoError::FrozenLoci { .. } => "frozen-loci",
        QsoError::NonSimpleEigenvalueOne { .. } => "non-simple-eigenvalue-one",
        QsoError::EigensolverFailure => "eigensolver-failure",
        QsoError::DegenerateNormalization => "degenerate-normalization",
        _ => "refusal",
    }
}

fn predict(cli: &Cli) -> Result<i32, QsoError> {
    let scenario = single_scenario(cli)?;
    let (a, x0) = scenario.build()?;
    let prediction = match predict_limit(&a, &x0) {
        Ok(p) => p,
        Err(e) if !e.is_input_error() => {
            // A numerical refusal still produces a report for the caller.
            let report = RefusalReport {
                scenario: scenario.label(),
                refused: true,
                kind: refusal_kind(&e),
                message: e.to_string(),
            };
            emit(cli, &to_json(&report))?;
            eprintln!("error: {e}");
            return Ok(3);
        }
        Err(e) => return Err(e),
    };
    match cli.format {
        Format::Json => {
            let out = PredictOutput { scenario: scenario.label(), prediction };
            emit(cli, &to_json(&out))?;
        }
        Format::Csv => {
            let mut text = String::from("quantity,value\n");
            let _ = writeln!(text, "beta,{}", prediction.beta());
            let _ = writeln!(text, "spectral_gap,{}", prediction.spectral_gap());
            for (i, &v) in prediction.limit().coords().iter().enumerate() {
                let _ = writeln!(text, "x{},{v}", i + 1);
            }
            emit(cli, &text)?;
        }
    }
    Ok(0)
}

fn spectrum(cli: &Cli) -> Result<i32, QsoError> {
    let scenario = single_scenario(cli)?;
    let (a, x0) = scenario.build()?;
    let spectrum = analyze_on_fiber_of(&a, &x0)?;
    match cli.format {
        Format::Json => {
            let out = SpectrumOutput { scenario: scenario.label(), spectrum };
            emit(cli, &to_json(&out))?;
        }
        Format::Csv => {
            let mut text = String::from("re,im,modulus\n");
            for e in spectrum.eigenvalues() {
                let _ = writeln!(text, "{},{},{}", e.re, e.im, e.modulus());
            }
            emit(cli, &text)?;
        }
    }
    Ok(0)
}

fn fixed_points(cli: &Cli) -> Result<i32, QsoError> {
    let scenario = single_scenario(cli)?;
    let (a, x0) = scenario.build()?;
    let (fiber, _) = fiber_of(&x0);
    let set = fixed_points_on_fiber(&a, &fiber)?;
    match cli.format {
        Format::Json => {
            let out = FixedPointsOutput { scenario: scenario.label(), fixed_points: set };
            emit(cli, &to_json(&out))?;
        }
        Format::Csv => {
            let mut text = String::from("vector,component,value\n");
            for (r, basis) in set.kernel_basis().iter().enumerate() {
                for (i, &v) in basis.iter().enumerate() {
                    let _ = writeln!(text, "{r},{i},{v}");
                }
            }
            emit(cli, &text)?;
        }
    }
    Ok(0)
}

fn cubic(cli: &Cli) -> Result<i32, QsoError> {
    let scenario = single_scenario(cli)?;
    let (a, _) = scenario.build()?;
    let table = build_cubic_matrix(&a);
    match cli.format {
        Format::Json => {
            let out = CubicOutput {
                scenario: scenario.label(),
                m: table.m(),
                n: table.n(),
                levels: table.levels(),
            };
            emit(cli, &to_json(&out))?;
        }
        Format::Csv => {
            let n = table.n();
            let mut text = String::from("i,j,k,value\n");
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let _ = writeln!(text, "{i},{j},{k},{}", table.get(i, j, k));
                    }
                }
            }
            emit(cli, &text)?;
        }
    }
    Ok(0)
}

fn verify(cli: &Cli) -> Result<i32, QsoError> {
    let (source, seed, scenarios) = match &cli.scenario {
        Some(path) => (path.display().to_string(), None, load_scenarios(path)?),
        None => ("builtin".to_string(), Some(cli.seed), builtin_suite(cli.seed)),
    };
    let config = VerifyConfig {
        conv_tol: cli.tol,
        max_iters: cli.max_iters,
        ..VerifyConfig::default()
    };
    let report = run_suite(&scenarios, &config)?;
    let passed = report.passed;
    let failed_checks = report.failed_checks;
    let failed_scenarios = report.scenarios.iter().filter(|r| !r.passed).count();
    match cli.format {
        Format::Json => {
            let out = VerifyOutput {
                source,
                seed,
                suite_size: scenarios.len(),
                config,
                report,
            };
            emit(cli, &to_json(&out))?;
        }
        Format::Csv => {
            let mut text = String::from("scenario,m,iterations,converged,checks,failed,passed\n");
            for r in &report.scenarios {
                let failed = r.checks.iter().filter(|c| !c.passed).count();
                let _ = writeln!(
                    text,
                    "{},{},{},{},{},{failed},{}",
                    r.scenario,
                    r.m,
                    r.iterations,
                    r.converged,
                    r.checks.len(),
                    r.passed
                );
            }
            emit(cli, &text)?;
        }
    }
    if passed {
        Ok(0)
    } else {
        eprintln!(
            "error: verification failed in {failed_scenarios} scenario(s) \
             ({failed_checks} check(s) over threshold)"
        );
        Ok(2)
    }
}
