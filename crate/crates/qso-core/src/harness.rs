//! Cross-verification harness: the nonlinear iteration checked against the
//! linear and spectral theory, per scenario.
//!
//! Every check compares two independently computed routes to the same
//! quantity (iterated dynamics vs. closed-form limit, direct vs.
//! stochastic-form update, increments vs. `H_c` residuals, ...), so a pass
//! is evidence that the whole chain of identities holds numerically, not
//! just that one implementation is self-consistent.  [`builtin_suite`]
//! generates the default battery of strictly positive scenarios used by
//! the command-line `verify` subcommand.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cubic::build_cubic_matrix;
use crate::error::QsoError;
use crate::fiber::fiber_of;
use crate::fixed_points::fixed_point_residual;
use crate::linear::{build_bc, iterate_linear};
use crate::operator::{
    apply_w, apply_w_stochastic_form, linkage_disequilibrium, simulate_to_convergence,
};
use crate::scenario::Scenario;
use crate::spectral::predict_limit;
use crate::tol::{DEFAULT_CONV_TOL, DEFAULT_MAX_ITERS, FORM_EQ_EPS};

/// Seed for the default verification suite.
pub const DEFAULT_SUITE_SEED: u64 = 0x5153_4F21;

/// Number of scenarios in the default verification suite.
pub const DEFAULT_SUITE_SIZE: usize = 56;

/// Thresholds and iteration limits for one harness run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    /// Convergence tolerance for the nonlinear iteration.
    pub conv_tol: f64,
    /// Iteration cap for the nonlinear iteration.
    pub max_iters: u64,
    /// Allowed distance between the converged state and the predicted limit.
    pub limit_tol: f64,
    /// Allowed disequilibrium sup-norm at the converged state.
    pub ld_tol: f64,
    /// Allowed disequilibrium and fixed-point residual at the predicted limit.
    pub residual_tol: f64,
    /// Allowed drift of the conserved scalar `β` along the trajectory.
    pub beta_tol: f64,
    /// Steps of the linear/nonlinear conjugacy comparison.
    pub conjugacy_steps: u64,
    /// Allowed per-step divergence in the conjugacy comparison.
    pub conjugacy_step_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            conv_tol: DEFAULT_CONV_TOL,
            max_iters: DEFAULT_MAX_ITERS,
            limit_tol: 1e-8,
            ld_tol: 1e-8,
            residual_tol: 1e-12,
            beta_tol: 1e-10,
            conjugacy_steps: 50,
            conjugacy_step_tol: 1e-12,
        }
    }
}

/// One cross-check: a measured quantity against its threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    /// What was compared.
    pub name: &'static str,
    /// The measured value (a sup-norm or absolute difference).
    pub measured: f64,
    /// The bound it must not exceed.
    pub threshold: f64,
    /// Whether `measured <= threshold`.
    pub passed: bool,
}

fn check(name: &'static str, measured: f64, threshold: f64) -> CheckOutcome {
    CheckOutcome { name, measured, threshold, passed: measured <= threshold }
}

/// Everything the harness measured on one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    /// The scenario's label.
    pub scenario: String,
    /// Number of loci.
    pub m: usize,
    /// Iterations the nonlinear dynamics took to converge.
    pub iterations: u64,
    /// Whether it converged within the iteration cap.
    pub converged: bool,
    /// The individual cross-checks.
    pub checks: Vec<CheckOutcome>,
    /// Whether every check passed (and the iteration converged).
    pub passed: bool,
}

/// The aggregate of a whole suite run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    /// Per-scenario results.
    pub scenarios: Vec<ScenarioReport>,
    /// Total number of checks across all scenarios.
    pub total_checks: usize,
    /// How many of them failed.
    pub failed_checks: usize,
    /// Whether every scenario passed.
    pub passed: bool,
}

fn sup_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).fold(0.0f64, |acc, (&a, &b)| acc.max((a - b).abs()))
}

fn sup_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()))
}

/// Run the full cross-check battery on one scenario.
///
/// Errors bubble up untouched, so a scenario the spectral route refuses
/// (frozen loci, non-simple eigenvalue 1) reports that refusal rather
/// than a fabricated check result.
pub fn run_scenario(scenario: &Scenario, config: &VerifyConfig) -> Result<ScenarioReport, QsoError> {
    let (a, x0) = scenario.build()?;
    let m = a.m();
    let prediction = predict_limit(&a, &x0)?;
    let (x_conv, iterations, converged) =
        simulate_to_convergence(&a, &x0, config.max_iters, config.conv_tol)?;
    let mut checks = Vec::new();

    // Nonlinear iteration vs. closed-form limit.
    checks.push(check(
        "limit-agreement",
        sup_diff(x_conv.coords(), prediction.limit().coords()),
        config.limit_tol,
    ));

    // Disequilibrium dies along the trajectory and at the limit.
    checks.push(check(
        "ld-at-convergence",
        sup_abs(&linkage_disequilibrium(&a, &x_conv)?),
        config.ld_tol,
    ));
    checks.push(check(
        "ld-at-limit",
        sup_abs(&linkage_disequilibrium(&a, prediction.limit())?),
        config.residual_tol,
    ));

    // The limit is a fixed point by the independent H_c characterization.
    checks.push(check(
        "fixed-point-at-limit",
        fixed_point_residual(&a, prediction.limit())?,
        config.residual_tol,
    ));

    // β = wᵀu is conserved from the first state to the converged one.
    let w = prediction.left_perron();
    let beta_at = |x: &crate::simplex::SimplexPoint| -> f64 {
        (0..m).map(|i| w[i] * x.coords()[2 * i]).sum()
    };
    checks.push(check(
        "beta-conservation",
        (beta_at(&x_conv) - prediction.beta()).abs(),
        config.beta_tol,
    ));

    // Pair sums are carried unchanged to the converged state.
    let (f0, _) = fiber_of(&x0);
    let (fc, _) = fiber_of(&x_conv);
    checks.push(check("pair-sum-conservation", sup_diff(f0.c(), fc.c()), 1e-9));

    // The two written forms of the update rule agree at the initial state.
    checks.push(check(
        "form-equivalence",
        sup_diff(
            apply_w(&a, &x0)?.coords(),
            apply_w_stochastic_form(&a, &x0)?.coords(),
        ),
        FORM_EQ_EPS,
    ));

    // The cubic interaction table reproduces one generation at the
    // initial state.
    let cubic = build_cubic_matrix(&a);
    checks.push(check(
        "cubic-reconstruction",
        sup_diff(&cubic.apply_quadratic_form(&x0)?, apply_w(&a, &x0)?.coords()),
        1e-13,
    ));

    // Linear conjugacy: the odd coordinates of the nonlinear trajectory
    // against powers of B applied on the fiber.
    let (fiber, u0) = fiber_of(&x0);
    let b = build_bc(&a, &fiber)?;
    let n = config.conjugacy_steps;
    let un = iterate_linear(&b, &u0, n);
    let mut x = x0.clone();
    for _ in 0..n {
        x = apply_w(&a, &x)?;
    }
    let odd: Vec<f64> = (0..m).map(|i| x.coords()[2 * i]).collect();
    checks.push(check(
        "linear-conjugacy",
        sup_diff(&odd, un.u()),
        n as f64 * config.conjugacy_step_tol,
    ));

    // The spectrum stays in the closed unit disk.
    let top = prediction
        .spectrum()
        .moduli()
        .first()
        .copied()
        .unwrap_or(1.0);
    checks.push(check("spectrum-in-unit-disk", top, 1.0 + 1e-9));

    let passed = converged && checks.iter().all(|c| c.passed);
    Ok(ScenarioReport {
        scenario: scenario.label().to_string(),
        m,
        iterations,
        converged,
        checks,
        passed,
    })
}

/// Run the harness over a list of scenarios and aggregate.
pub fn run_suite(
    scenarios: &[Scenario],
    config: &VerifyConfig,
) -> Result<VerifyReport, QsoError> {
    let mut reports = Vec::with_capacity(scenarios.len());
    for s in scenarios {
        reports.push(run_scenario(s, config)?);
    }
    let total_checks = reports.iter().map(|r| r.checks.len()).sum();
    let failed_checks = reports
        .iter()
        .flat_map(|r| &r.checks)
        .filter(|c| !c.passed)
        .count();
    let passed = reports.iter().all(|r| r.passed);
    Ok(VerifyReport { scenarios: reports, total_checks, failed_checks, passed })
}

/// Generate the default verification suite: eight strictly positive
/// scenarios at every locus count from 2 through 8, deterministically from
/// the seed.
pub fn builtin_suite(seed: u64) -> Vec<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(DEFAULT_SUITE_SIZE);
    for m in 2..=8usize {
        for idx in 0..8 {
            let mut rows = vec![vec![0.0; m]; m];
            for (i, row) in rows.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    if i != j {
                        *v = rng.random_range(0.05..=1.0);
                    }
                }
            }
            let raw: Vec<f64> = (0..2 * m).map(|_| rng.random_range(0.01..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let x0 = raw.iter().map(|v| v / total).collect();
            out.push(Scenario {
                name: Some(format!("suite-m{m}-{idx:02}")),
                a: rows,
                x0,
            });
        }
    }
    out
}
