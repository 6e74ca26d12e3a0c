//! Verification suites and the JSON report they produce.
//!
//! Each suite reduces to one scalar metric (a maximum relative error over a
//! fixed deterministic check set) compared against one pinned tolerance, so a
//! report line is always "this many checks, this max error, this bound".
//! The report shape is documented by `docs/verify-report.schema.json`.

use dcone_core::free_dynamics::{
    self, FreeDynamicsError, MatchedBranch, COUPLED_RESIDUAL_TOLERANCE,
};
use dcone_core::landau::{self, FieldConfig, LandauState};
use dcone_core::oracle::{self, SpectrumFault, SpectrumGridSpec};
use dcone_core::specfun;
use dcone_core::{Sign, SpinChannel, SurfaceGeometry, UnitSystem};
use serde::Serialize;

/// Residual bound shared by the residual and matched-pair suites.
const RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Agreement bound for the two independent Bessel evaluators.
const BESSEL_ROUTE_TOLERANCE: f64 = 1e-10;

/// Selectable verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    Spectrum,
    Residuals,
    Matched,
    Specfun,
}

impl SuiteName {
    fn label(self) -> &'static str {
        match self {
            SuiteName::Spectrum => "spectrum",
            SuiteName::Residuals => "residuals",
            SuiteName::Matched => "matched",
            SuiteName::Specfun => "specfun",
        }
    }
}

/// Worst offender of a suite, kept even when the suite passes.
#[derive(Debug, Clone, Serialize)]
pub struct WorstCase {
    pub description: String,
    pub error: f64,
}

/// One suite outcome.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub worst: Option<WorstCase>,
}

/// Full verification outcome; serializes to the documented JSON schema.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub fault: String,
    pub grid_interior: usize,
    pub suites: Vec<SuiteReport>,
}

/// Running (max error, worst case) accumulator.
struct Tracker {
    checks: usize,
    max_error: f64,
    worst: Option<WorstCase>,
}

impl Tracker {
    fn new() -> Self {
        Tracker {
            checks: 0,
            max_error: 0.0,
            worst: None,
        }
    }

    fn record(&mut self, description: String, error: f64) {
        self.checks += 1;
        if self.worst.is_none() || error > self.max_error {
            self.max_error = error.max(self.max_error);
            self.worst = Some(WorstCase { description, error });
        }
    }

    fn into_report(self, name: SuiteName, tolerance: f64) -> SuiteReport {
        SuiteReport {
            name: name.label().to_string(),
            passed: self.max_error <= tolerance,
            checks: self.checks,
            max_error: self.max_error,
            tolerance,
            worst: self.worst,
        }
    }
}

/// Runs the requested suites and assembles the report.
///
/// `grid_interior` and `tolerance` apply to the spectrum suite; the other
/// suites carry their own pinned tolerances. `fault` deliberately corrupts
/// the analytic side of the spectrum comparison as a negative control.
pub fn run_verify(
    grid_interior: usize,
    tolerance: f64,
    fault: SpectrumFault,
    filter: Option<SuiteName>,
) -> Result<VerifyReport, String> {
    let units = UnitSystem::natural();
    let wanted = |name: SuiteName| filter.is_none() || filter == Some(name);

    let mut suites = Vec::new();
    if wanted(SuiteName::Spectrum) {
        suites.push(spectrum_suite(grid_interior, tolerance, fault, &units)?);
    }
    if wanted(SuiteName::Residuals) {
        suites.push(residual_suite(&units)?);
    }
    if wanted(SuiteName::Matched) {
        suites.push(matched_suite(&units)?);
    }
    if wanted(SuiteName::Specfun) {
        suites.push(specfun_suite()?);
    }

    Ok(VerifyReport {
        passed: suites.iter().all(|s| s.passed),
        fault: match fault {
            SpectrumFault::None => "none",
            SpectrumFault::DropEtaTerm => "drop-eta-term",
        }
        .to_string(),
        grid_interior,
        suites,
    })
}

/// Closed-form Landau eigenvalues against the finite-difference eigensolver
/// over the standard parameter grid.
fn spectrum_suite(
    interior: usize,
    tolerance: f64,
    fault: SpectrumFault,
    units: &UnitSystem,
) -> Result<SuiteReport, String> {
    let grid = SpectrumGridSpec {
        alphas: vec![0.3, 0.5, 0.7, 1.0],
        j_values: vec![-2, -1, 0, 1, 2],
        n_max: 3,
        masses: vec![0.0, 1.0],
        b0: 1.0,
    };
    let report = oracle::compare_spectrum(&grid, interior, tolerance, fault, units)
        .map_err(|e| format!("spectrum comparison failed: {e}"))?;
    let worst = report.worst.as_ref().map(|w| WorstCase {
        description: format!(
            "alpha={} n={} j={} lambda={} s={} eta={} mass={}: analytic K={:.12e} vs oracle K={:.12e}",
            w.alpha, w.n, w.j, w.lambda, w.s, w.eta, w.mass, w.analytic_k, w.oracle_k
        ),
        error: w.rel_error,
    });
    Ok(SuiteReport {
        name: SuiteName::Spectrum.label().to_string(),
        passed: report.passed,
        checks: report.comparisons.len(),
        max_error: report.max_rel_error,
        tolerance,
        worst,
    })
}

/// Second-order radial equation residuals for Landau profiles and free
/// Bessel modes, each evaluated at its own eigenvalue.
fn residual_suite(units: &UnitSystem) -> Result<SuiteReport, String> {
    let mut tracker = Tracker::new();

    // (alpha, n, j, lambda, s, eta, mass) at B0 = 1.
    let landau_states: [(f64, u32, i32, Sign, Sign, Sign, f64); 4] = [
        (1.0, 0, 0, Sign::Plus, Sign::Plus, Sign::Minus, 0.0),
        (0.7, 1, 1, Sign::Plus, Sign::Plus, Sign::Minus, 0.0),
        (0.5, 2, -1, Sign::Minus, Sign::Plus, Sign::Plus, 1.0),
        (0.3, 3, 2, Sign::Plus, Sign::Minus, Sign::Plus, 1.0),
    ];
    for (alpha, n, j, lambda, s, eta, mass) in landau_states {
        let geom = SurfaceGeometry::new(alpha).map_err(|e| e.to_string())?;
        let field = FieldConfig::new(1.0, mass).map_err(|e| e.to_string())?;
        let state = LandauState {
            n,
            j,
            channel: SpinChannel { lambda, s },
            eta,
        };
        let profile =
            landau::radial_profile(&state, &geom, &field, units).map_err(|e| e.to_string())?;
        let energy = landau::energy_squared(&state, &geom, &field, units).sqrt();
        let k_value = landau::k_lambda(energy, j as f64, state.channel, eta, &geom, &field, units);
        let cutoff = profile.support_cutoff();
        let samples: Vec<f64> = (1..=50).map(|i| cutoff * i as f64 / 51.0).collect();
        let residual = landau::ode_residual(&profile, k_value, &samples);
        tracker.record(
            format!("Landau radial equation at alpha={alpha} n={n} j={j} lambda={lambda} s={s} eta={eta} mass={mass}"),
            residual,
        );
    }

    // Free modes: (j, s, alpha) at fixed wavenumber.
    let k = 1.3;
    let free_states: [(f64, Sign, f64); 5] = [
        (0.0, Sign::Plus, 1.0),
        (1.0, Sign::Plus, 0.7),
        (-2.0, Sign::Plus, 0.5),
        (0.2, Sign::Plus, 0.7),
        (3.0, Sign::Minus, 1.0),
    ];
    let free_samples: Vec<f64> = (0..50).map(|i| 0.2 + 7.8 * i as f64 / 49.0).collect();
    for (j, s, alpha) in free_states {
        let geom = SurfaceGeometry::new(alpha).map_err(|e| e.to_string())?;
        let (psi_a, psi_b) =
            free_dynamics::free_solution(j, s, &geom, k).map_err(|e| e.to_string())?;
        let (nu_a, nu_b) = free_dynamics::bessel_orders(j, s, &geom);
        for (component, solution, nu) in [("A", &psi_a, nu_a), ("B", &psi_b, nu_b)] {
            let residual = free_dynamics::uncoupled_residual(solution, k, nu, &free_samples);
            tracker.record(
                format!("free radial equation, component {component}, j={j} s={s} alpha={alpha}"),
                residual,
            );
        }
    }

    Ok(tracker.into_report(SuiteName::Residuals, RESIDUAL_TOLERANCE))
}

/// First-order coupled-system residuals for matched component pairs across
/// every branch kind.
fn matched_suite(units: &UnitSystem) -> Result<SuiteReport, String> {
    let energy = 1.9;
    let mass = 0.6;
    // (j, s, alpha, branch).
    let pairs: [(f64, Sign, f64, MatchedBranch); 6] = [
        (0.0, Sign::Plus, 0.7, MatchedBranch::Sin),
        (0.0, Sign::Plus, 0.7, MatchedBranch::Cos),
        (1.0, Sign::Plus, 0.7, MatchedBranch::Positive),
        (0.2, Sign::Plus, 0.7, MatchedBranch::Negative),
        (-1.3, Sign::Minus, 0.5, MatchedBranch::Positive),
        (2.0, Sign::Plus, 1.0, MatchedBranch::Positive),
    ];
    let samples: Vec<f64> = (0..40).map(|i| 0.3 + 5.7 * i as f64 / 39.0).collect();

    let mut tracker = Tracker::new();
    for (j, s, alpha, branch) in pairs {
        let geom = SurfaceGeometry::new(alpha).map_err(|e| e.to_string())?;
        let (psi_a, psi_b) = free_dynamics::matched_pair(j, s, &geom, energy, mass, units, branch)
            .map_err(|e| e.to_string())?;
        let residual = match free_dynamics::coupled_residual(
            energy, mass, j, s, &geom, &psi_a, &psi_b, &samples, units,
        ) {
            Ok(r) => r,
            Err(FreeDynamicsError::InconsistentPair { residual }) => residual,
            Err(e) => return Err(e.to_string()),
        };
        tracker.record(
            format!("coupled pair, branch {branch:?}, j={j} s={s} alpha={alpha}"),
            residual,
        );
    }

    Ok(tracker.into_report(SuiteName::Matched, COUPLED_RESIDUAL_TOLERANCE))
}

/// Production Bessel evaluator against the independent reference series on
/// the reference's validated window.
fn specfun_suite() -> Result<SuiteReport, String> {
    let orders = [-2.5, -0.5, 0.0, 0.5, 1.5, 4.25, 9.5];
    let args = [0.3, 2.0, 8.0, 14.5, 22.0, 30.0];

    let mut tracker = Tracker::new();
    for &nu in &orders {
        for &x in &args {
            let reference = oracle::series_bessel_terms(nu, x).map_err(|e| e.to_string())?;
            let value = specfun::bessel_j(nu, x).map_err(|e| e.to_string())?;
            // Cancellation-aware scale: agreement is relative to the value
            // unless the series lost digits to cancellation.
            let denom = reference
                .value
                .abs()
                .max(1e-6 * reference.abs_scale)
                .max(1e-300);
            let rel = (value - reference.value).abs() / denom;
            tracker.record(format!("J_nu route agreement at nu={nu} x={x}"), rel);
        }
    }

    Ok(tracker.into_report(SuiteName::Specfun, BESSEL_ROUTE_TOLERANCE))
}
