use num_complex::Complex64;
use serde::Serialize;

use super::{l2_norm, StateSpec};
use crate::dynamics;
use crate::error::{Result, TcsError};
use crate::params::OscParams;
use crate::states::Grid;

/// Edge amplitude allowed relative to the peak before a grid is rejected.
pub const EDGE_AMPLITUDE_LIMIT: f64 = 1e-14;

struct Sample {
    values: Vec<Complex64>,
    coeffs: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TimeOrder {
    /// Central difference, O(dt²).
    Second,
    /// Richardson-extrapolated central difference, O(dt⁴).
    Richardson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualOptions {
    pub time_order: TimeOrder,
    /// Evaluate the state with its prefactor on the conjugate branch.
    pub conjugate_branch: bool,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        ResidualOptions {
            time_order: TimeOrder::Richardson,
            conjugate_branch: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub t: f64,
    pub grid_center: f64,
    pub grid_half_width: f64,
    pub grid_points: usize,
    pub dt: f64,
    /// ‖iħ∂ₜΨ − ĤΨ‖
    pub abs_l2: f64,
    /// abs_l2 / ‖ĤΨ‖
    pub rel_l2: f64,
    pub time_order: u32,
    pub space_order: u32,
}

/// Schrödinger residual of a state with the default options.
pub fn schrodinger_residual(
    params: &OscParams,
    spec: &StateSpec,
    grid: &Grid,
    t: f64,
    dt: f64,
) -> Result<ResidualReport> {
    schrodinger_residual_with(params, spec, grid, t, dt, ResidualOptions::default())
}

/// `iħ∂ₜΨ − ĤΨ` on the interior of `grid`, with `∂ₜ` from finite
/// differences in time and `∂ₓₓ` from the 4th-order five-point stencil.
///
/// Both stencils act on `Φ = Ψ·exp(−iθ/ħ)`, where `θ(x, t')` is the real part
/// of the quadratic phase written as `A + Bv + Cv²`, `v = x − x(t)`, with
/// coefficients taken at each stencil time. The coefficients are differenced
/// with the same stencil, which is the exact derivative of their interpolating
/// polynomial, and the product rule recombines `∂ₜΨ` and `∂ₓₓΨ` from `Φ` and
/// `θ`. The oscillating phase is never differenced on the grid.
pub fn schrodinger_residual_with(
    params: &OscParams,
    spec: &StateSpec,
    grid: &Grid,
    t: f64,
    dt: f64,
    opts: ResidualOptions,
) -> Result<ResidualReport> {
    if !(dt > 0.0) {
        return Err(TcsError::InvalidArgument(format!(
            "dt must be positive (got {dt})"
        )));
    }
    let base = dynamics::phase_state(params, t)?;
    let hbar = params.hbar();
    let sample = |offset: f64| -> Result<Sample> {
        let phase = if offset == 0.0 {
            base
        } else {
            dynamics::phase_state_near(params, &base, t + offset)?
        };
        let mut state = spec.build_on(params, phase)?;
        if opts.conjugate_branch {
            state = state.conjugate_branch();
        }
        let re_w = phase.width().re;
        let shift = phase.x - base.x;
        let coeffs = [
            phase.sigma - phase.p * shift + 0.5 * re_w * shift * shift,
            phase.p - re_w * shift,
            0.5 * re_w,
        ];
        let values = (0..grid.n_points())
            .map(|i| {
                let v = grid.point(i) - base.x;
                let theta = coeffs[0] + coeffs[1] * v + coeffs[2] * v * v;
                state.evaluate(grid.point(i)) * Complex64::from_polar(1.0, -theta / hbar)
            })
            .collect();
        Ok(Sample { values, coeffs })
    };

    let now = sample(0.0)?;
    let phi = &now.values;
    let peak = phi.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let edge = phi[0].norm().max(phi[phi.len() - 1].norm());
    if edge > EDGE_AMPLITUDE_LIMIT * peak {
        return Err(TcsError::BoundaryLeak {
            edge: edge / peak,
            limit: EDGE_AMPLITUDE_LIMIT,
        });
    }

    let (dphi, dcoeffs, time_order): (Vec<Complex64>, [f64; 3], u32) = match opts.time_order {
        TimeOrder::Second => {
            let (plus, minus) = (sample(dt)?, sample(-dt)?);
            let d = |a: f64, b: f64| (a - b) / (2.0 * dt);
            (
                plus.values
                    .iter()
                    .zip(&minus.values)
                    .map(|(a, b)| (a - b) / (2.0 * dt))
                    .collect(),
                std::array::from_fn(|k| d(plus.coeffs[k], minus.coeffs[k])),
                2,
            )
        }
        TimeOrder::Richardson => {
            let (p1, m1, p2, m2) = (
                sample(dt)?,
                sample(-dt)?,
                sample(2.0 * dt)?,
                sample(-2.0 * dt)?,
            );
            let d =
                |a1: f64, b1: f64, a2: f64, b2: f64| (8.0 * (a1 - b1) - (a2 - b2)) / (12.0 * dt);
            let values = (0..phi.len())
                .map(|i| {
                    (8.0 * (p1.values[i] - m1.values[i]) - (p2.values[i] - m2.values[i]))
                        / (12.0 * dt)
                })
                .collect();
            let coeffs =
                std::array::from_fn(|k| d(p1.coeffs[k], m1.coeffs[k], p2.coeffs[k], m2.coeffs[k]));
            (values, coeffs, 4)
        }
    };

    let (m, g, w0) = (params.m(), params.gamma(), params.omega0());
    let dx = grid.spacing();
    let kinetic = -(-g * t).exp() * hbar * hbar / (2.0 * m);
    let potential = 0.5 * (g * t).exp() * m * w0 * w0;
    let [_, b1, c2] = now.coeffs;
    let i_unit = Complex64::i();
    let n = phi.len();
    let mut residual = Vec::with_capacity(n);
    let mut h_psi = Vec::with_capacity(n);
    for i in 2..n - 2 {
        let lap = (-phi[i - 2] + 16.0 * phi[i - 1] - 30.0 * phi[i] + 16.0 * phi[i + 1]
            - phi[i + 2])
            / (12.0 * dx * dx);
        let grad = (phi[i - 2] - 8.0 * phi[i - 1] + 8.0 * phi[i + 1] - phi[i + 2]) / (12.0 * dx);
        let x = grid.point(i);
        let v = x - base.x;
        let k = (b1 + 2.0 * c2 * v) / hbar;
        let theta_t = dcoeffs[0] + dcoeffs[1] * v + dcoeffs[2] * v * v;
        let lap_psi = lap + 2.0 * i_unit * k * grad + (i_unit * 2.0 * c2 / hbar - k * k) * phi[i];
        let h = kinetic * lap_psi + potential * x * x * phi[i];
        residual.push(i_unit * hbar * dphi[i] - theta_t * phi[i] - h);
        h_psi.push(h);
    }
    let abs_l2 = l2_norm(&residual, dx);
    let rel_l2 = abs_l2 / l2_norm(&h_psi, dx);
    Ok(ResidualReport {
        t,
        grid_center: grid.center(),
        grid_half_width: grid.half_width(),
        grid_points: grid.n_points(),
        dt,
        abs_l2,
        rel_l2,
        time_order,
        space_order: 4,
    })
}
