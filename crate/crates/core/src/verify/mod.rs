//! Independent numerical oracles for the analytic constructions.
//!
//! Nothing here reuses the ladder algebra or the closed-form moments: the
//! checks work from grid samples of the wave function, finite-difference
//! stencils and a Crank–Nicolson propagator.

mod ehrenfest;
mod propagate;
mod report;
mod residual;
mod suite;
mod summary;

pub use ehrenfest::{ehrenfest_check, grid_observables, quadrature_grid, MAX_QUADRATURE_POINTS};
pub use propagate::{
    overlap, propagate_oracle, propagate_spec, run_grid, time_convergence_ratio, GridState,
    Propagation, EDGE_MASS_LIMIT,
};
pub use report::{
    battery_report, point_report, propagation_checks, residual_checks, ReportOptions,
    NEGATIVE_CONTROL_MIN, NEGATIVE_CONTROL_TIME, NORM_DRIFT_TOL, OVERLAP_TOL, PROPAGATION_POINTS,
    PROPAGATION_STEPS, PROPAGATION_T, RESIDUAL_DT, RESIDUAL_MAX_LEVEL, RESIDUAL_SAMPLES,
    RESIDUAL_TOL, TOLERANCE_KEYS,
};
pub use residual::{
    schrodinger_residual, schrodinger_residual_with, ResidualOptions, ResidualReport, TimeOrder,
    EDGE_AMPLITUDE_LIMIT,
};
pub use suite::{
    coeff_gap, commutator_gap, continuation_gap, invariant_suite, invariant_suite_with, ode_gap,
    SuiteOptions,
};
pub use summary::{CheckResult, Relation, VerificationSummary};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::PhaseState;
use crate::error::Result;
use crate::params::OscParams;
use crate::states::{self, Grid, PolyGaussian};

/// Envelope widths on each side of the packet in default grids.
pub const DEFAULT_SIGMAS: f64 = 12.0;
/// Points in default grids.
pub const DEFAULT_POINTS: usize = 4096;
/// Fock truncation used for coherent states in the oracles.
pub const COHERENT_N_MAX: usize = 40;

/// Which state an oracle should build.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StateSpec {
    Fock(usize),
    Coherent(Complex64),
}

impl StateSpec {
    pub fn build_on(&self, params: &OscParams, phase: PhaseState) -> Result<PolyGaussian> {
        match *self {
            StateSpec::Fock(n) => states::fock_on(params, phase, n),
            StateSpec::Coherent(alpha) => Ok(states::coherent_on(
                params,
                phase,
                alpha,
                COHERENT_N_MAX,
                states::COHERENT_TAIL_TOL,
            )?
            .state),
        }
    }

    pub fn build(&self, params: &OscParams, t: f64) -> Result<PolyGaussian> {
        self.build_on(params, crate::dynamics::phase_state(params, t)?)
    }

    pub fn label(&self) -> String {
        match self {
            StateSpec::Fock(n) => format!("fock{n}"),
            StateSpec::Coherent(a) => format!("coherent({},{})", a.re, a.im),
        }
    }
}

/// 4096-point grid centred on ⟨x⟩ spanning ±12 envelope widths, widened in
/// half-width steps until the edge amplitude is below
/// [`EDGE_AMPLITUDE_LIMIT`] of the peak.
pub fn default_grid(state: &PolyGaussian) -> Result<Grid> {
    let (center, _) = state.position_moments()?;
    let sigma = state.envelope_sigma();
    let mut half = DEFAULT_SIGMAS * sigma;
    loop {
        let grid = Grid::new(center, half, DEFAULT_POINTS)?;
        let values = state.evaluate_grid(&grid);
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let edge = values[0].norm().max(values[values.len() - 1].norm());
        if edge <= 0.5 * EDGE_AMPLITUDE_LIMIT * peak || half > 4.0 * DEFAULT_SIGMAS * sigma {
            return Ok(grid);
        }
        half += 0.5 * sigma;
    }
}

pub(crate) fn l2_norm(values: &[Complex64], dx: f64) -> f64 {
    (values.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx).sqrt()
}
