use num_complex::Complex64;

use super::{
    default_grid, ehrenfest_check, invariant_suite, overlap, propagate_spec,
    schrodinger_residual_with, ResidualOptions, StateSpec, VerificationSummary,
};
use crate::battery::{self, BatteryPoint};
use crate::error::Result;
use crate::params::OscParams;

/// Evenly spaced residual times over each battery point's window.
pub const RESIDUAL_SAMPLES: usize = 13;
pub const RESIDUAL_DT: f64 = 1e-4;
pub const RESIDUAL_TOL: f64 = 1e-5;
pub const RESIDUAL_MAX_LEVEL: usize = 3;
/// The conjugated-branch ground state must leave at least this residual.
pub const NEGATIVE_CONTROL_MIN: f64 = 1e-2;
pub const NEGATIVE_CONTROL_TIME: f64 = 0.25;

pub const PROPAGATION_T: f64 = 2.0;
pub const PROPAGATION_POINTS: usize = 4096;
pub const PROPAGATION_STEPS: usize = 20_000;
pub const OVERLAP_TOL: f64 = 1e-5;
pub const NORM_DRIFT_TOL: f64 = 1e-8;

/// Check keys accepted by [`VerificationSummary::retolerance`] overrides.
pub const TOLERANCE_KEYS: &[&str] = &[
    "wronskian",
    "commutator",
    "ladder_lowering",
    "ladder_raising",
    "gram",
    "norm_in_time",
    "route_equivalence",
    "product_floor",
    "continuation_identity",
    "ode_oracle",
    "mean_x",
    "mean_p",
    "mean_x2",
    "mean_p2",
    "mean_e",
    "residual",
    "negative_control",
    "overlap",
    "norm_drift",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    /// Evaluate the residual checks on the conjugated branch.
    pub corrupt_branch: bool,
    pub suite_times: usize,
    pub ehrenfest_times: usize,
    /// Run the Crank–Nicolson comparison for the γ ∈ {0, 0.4}, μ = 1 points.
    pub propagation: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            corrupt_branch: false,
            suite_times: 7,
            ehrenfest_times: 7,
            propagation: true,
        }
    }
}

/// Residuals of the Fock states 0..=3 at [`RESIDUAL_SAMPLES`] times plus the
/// conjugated-branch ground-state control.
pub fn residual_checks(params: &OscParams, corrupt_branch: bool) -> Result<VerificationSummary> {
    let mut summary = VerificationSummary::new();
    let opts = ResidualOptions {
        conjugate_branch: corrupt_branch,
        ..Default::default()
    };
    for t in battery::sample_times(params, RESIDUAL_SAMPLES) {
        for n in 0..=RESIDUAL_MAX_LEVEL {
            let spec = StateSpec::Fock(n);
            let grid = default_grid(&spec.build(params, t)?)?;
            let report = schrodinger_residual_with(params, &spec, &grid, t, RESIDUAL_DT, opts)?;
            summary.check_le(
                format!("fock{n}/t={t:.4}/residual"),
                report.rel_l2,
                RESIDUAL_TOL,
            );
        }
    }
    let spec = StateSpec::Fock(0);
    let t = NEGATIVE_CONTROL_TIME;
    let grid = default_grid(&spec.build(params, t)?)?;
    let control = ResidualOptions {
        conjugate_branch: true,
        ..Default::default()
    };
    let report = schrodinger_residual_with(params, &spec, &grid, t, RESIDUAL_DT, control)?;
    summary.check_ge(
        format!("fock0/t={t}/negative_control"),
        report.rel_l2,
        NEGATIVE_CONTROL_MIN,
    );
    Ok(summary)
}

/// Crank–Nicolson evolution of `spec` from 0 to [`PROPAGATION_T`] against
/// the analytic state.
pub fn propagation_checks(params: &OscParams, spec: &StateSpec) -> Result<VerificationSummary> {
    let mut summary = VerificationSummary::new();
    let (run, exact) = propagate_spec(
        params,
        spec,
        PROPAGATION_T,
        PROPAGATION_STEPS,
        PROPAGATION_POINTS,
    )?;
    let dx = run.state.grid.spacing();
    let norms = (run.state.norm_sq() * overlap(&exact, &exact, dx).re).sqrt();
    let defect = 1.0 - overlap(&run.state.values, &exact, dx).norm() / norms;
    let label = spec.label();
    summary.check_le(format!("{label}/overlap"), defect, OVERLAP_TOL);
    summary.check_le(
        format!("{label}/norm_drift"),
        run.norm_drift,
        NORM_DRIFT_TOL,
    );
    Ok(summary)
}

fn record(summary: &mut VerificationSummary, prefix: &str, part: Result<VerificationSummary>) {
    match part {
        Ok(s) => summary.merge(prefix, s),
        Err(e) => summary.fail(prefix, e.to_string()),
    }
}

/// Every check for one battery point.
pub fn point_report(point: &BatteryPoint, opts: ReportOptions) -> VerificationSummary {
    let mut summary = VerificationSummary::new();
    let label = point.label();
    let params = &point.params;
    record(
        &mut summary,
        &format!("{label}/invariants"),
        invariant_suite(params, &battery::sample_times(params, opts.suite_times)),
    );
    record(
        &mut summary,
        &format!("{label}/schrodinger"),
        residual_checks(params, opts.corrupt_branch),
    );
    let times = battery::sample_times(params, opts.ehrenfest_times);
    for spec in [
        StateSpec::Fock(0),
        StateSpec::Fock(3),
        StateSpec::Coherent(Complex64::new(1.0, 0.5)),
    ] {
        record(
            &mut summary,
            &format!("{label}/ehrenfest"),
            ehrenfest_check(params, &spec, &times),
        );
    }
    if opts.propagation && point.gamma < 1.0 && point.mu == 1.0 {
        record(
            &mut summary,
            &format!("{label}/propagation"),
            propagation_checks(params, &StateSpec::Fock(0)),
        );
    }
    summary
}

/// [`point_report`] over the whole battery.
pub fn battery_report(opts: ReportOptions) -> VerificationSummary {
    let mut summary = VerificationSummary::new();
    for point in battery::battery() {
        summary.merge("battery", point_report(&point, opts));
    }
    summary
}
