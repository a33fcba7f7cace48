use rustfft::FftPlanner;

use super::{default_grid, CheckResult, Relation, StateSpec, VerificationSummary, DEFAULT_POINTS};
use crate::error::Result;
use crate::observables::{expectations_cs, expectations_tcs, ObservableSet};
use crate::params::OscParams;
use crate::states::{Grid, PolyGaussian};

/// Tolerance on quadrature means (scaled by max(1, |mean| + spread)).
pub const MEAN_TOL: f64 = 1e-8;
/// Relative tolerance on quadrature second moments and energy.
pub const MOMENT_TOL: f64 = 1e-6;

/// Largest grid used to resolve a chirped state.
pub const MAX_QUADRATURE_POINTS: usize = 1 << 20;

/// Moments of x̂, p̂ and the energy from grid samples alone.
///
/// Position moments are rectangle sums; momentum moments come from the
/// discrete Fourier transform of the samples. All sums are normalised by
/// the discrete norm.
pub fn grid_observables(state: &PolyGaussian, grid: &Grid) -> ObservableSet {
    let params = state.params();
    let hbar = params.hbar();
    let mut psi = state.evaluate_grid(grid);
    let n = psi.len();
    let dx = grid.spacing();
    let (mut norm, mut sx, mut sx2) = (0.0, 0.0, 0.0);
    for (i, v) in psi.iter().enumerate() {
        let x = grid.point(i);
        let rho = v.norm_sqr();
        norm += rho;
        sx += x * rho;
        sx2 += x * x * rho;
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut psi);
    let dk = 2.0 * std::f64::consts::PI / (n as f64 * dx);
    let (mut knorm, mut sp, mut sp2) = (0.0, 0.0, 0.0);
    for (j, v) in psi.iter().enumerate() {
        let k = if j < n.div_ceil(2) {
            j as f64
        } else {
            j as f64 - n as f64
        } * dk;
        let rho = v.norm_sqr();
        knorm += rho;
        sp += hbar * k * rho;
        sp2 += hbar * hbar * k * k * rho;
    }
    let (mean_x, mean_x2) = (sx / norm, sx2 / norm);
    let (mean_p, mean_p2) = (sp / knorm, sp2 / knorm);
    let t = state.t();
    let (m, g, w0) = (params.m(), params.gamma(), params.omega0());
    let var_x = mean_x2 - mean_x * mean_x;
    let var_p = mean_p2 - mean_p * mean_p;
    ObservableSet {
        t,
        mean_x,
        mean_p,
        mean_x2,
        mean_p2,
        var_x,
        var_p,
        mean_e: (-2.0 * g * t).exp() * mean_p2 / (2.0 * m) + 0.5 * m * w0 * w0 * mean_x2,
        product: var_x * var_p,
    }
}

/// The [`default_grid`] box with enough points that the Nyquist wavenumber
/// covers the local wavenumber of the state at the box edges.
///
/// `None` when that needs more than [`MAX_QUADRATURE_POINTS`].
pub fn quadrature_grid(state: &PolyGaussian) -> Result<Option<Grid>> {
    let base = default_grid(state)?;
    let width = state.width();
    let reach = base.half_width() + (base.center() - state.phase().x).abs();
    let band =
        (state.phase().p.abs() + (width.re.abs() + width.im) * reach) / state.params().hbar();
    let needed = (2.0 * base.half_width() * band / std::f64::consts::PI).ceil() as usize + 1;
    let n_points = needed.max(DEFAULT_POINTS).next_power_of_two();
    if n_points > MAX_QUADRATURE_POINTS {
        return Ok(None);
    }
    Ok(Some(Grid::new(base.center(), base.half_width(), n_points)?))
}

/// Compares grid-quadrature moments against the closed forms at each time.
pub fn ehrenfest_check(
    params: &OscParams,
    spec: &StateSpec,
    t_samples: &[f64],
) -> Result<VerificationSummary> {
    let mut summary = VerificationSummary::new();
    let label = spec.label();
    let mut skipped = Vec::new();
    let (mut err_x, mut err_p, mut err_x2, mut err_p2, mut err_e) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &t in t_samples {
        let state = spec.build(params, t)?;
        let Some(grid) = quadrature_grid(&state)? else {
            skipped.push(t);
            continue;
        };
        let measured = grid_observables(&state, &grid);
        let expected = match spec {
            StateSpec::Fock(n) => expectations_tcs(params, *n, t)?,
            StateSpec::Coherent(alpha) => expectations_cs(params, *alpha, t)?,
        };
        let scale_x = 1.0f64.max(expected.mean_x.abs() + expected.var_x.sqrt());
        let scale_p = 1.0f64.max(expected.mean_p.abs() + expected.var_p.sqrt());
        err_x = err_x.max((measured.mean_x - expected.mean_x).abs() / scale_x);
        err_p = err_p.max((measured.mean_p - expected.mean_p).abs() / scale_p);
        err_x2 = err_x2.max(((measured.mean_x2 - expected.mean_x2) / expected.mean_x2).abs());
        err_p2 = err_p2.max(((measured.mean_p2 - expected.mean_p2) / expected.mean_p2).abs());
        err_e = err_e.max(((measured.mean_e - expected.mean_e) / expected.mean_e).abs());
    }
    summary.check_le(format!("{label}/mean_x"), err_x, MEAN_TOL);
    summary.check_le(format!("{label}/mean_p"), err_p, MEAN_TOL);
    summary.check_le(format!("{label}/mean_x2"), err_x2, MOMENT_TOL);
    summary.check_le(format!("{label}/mean_p2"), err_p2, MOMENT_TOL);
    summary.check_le(format!("{label}/mean_e"), err_e, MOMENT_TOL);
    let resolved = t_samples.len() - skipped.len();
    summary.push(CheckResult {
        name: format!("{label}/coverage"),
        passed: resolved > 0 || t_samples.is_empty(),
        measured: resolved as f64,
        tolerance: 1.0,
        relation: Relation::AtLeast,
        detail: Some(format!(
            "{resolved} of {} sample times resolvable on at most {MAX_QUADRATURE_POINTS} points",
            t_samples.len()
        )),
    });
    Ok(summary)
}
