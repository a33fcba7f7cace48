use num_complex::Complex64;

use super::{l2_norm, StateSpec, DEFAULT_SIGMAS};
use crate::dynamics;
use crate::error::{Result, TcsError};
use crate::params::OscParams;
use crate::states::Grid;

/// Largest probability allowed in the outer edge bands of the box.
pub const EDGE_MASS_LIMIT: f64 = 1e-10;

/// Samples of a wave function on a grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub grid: Grid,
    pub t: f64,
    pub values: Vec<Complex64>,
}

impl GridState {
    pub fn norm_sq(&self) -> f64 {
        l2_norm(&self.values, self.grid.spacing()).powi(2)
    }

    /// Probability in the outer 2% of points on each side.
    pub fn edge_mass(&self) -> f64 {
        let n = self.values.len();
        let band = (n / 50).max(4).min(n / 2);
        let dx = self.grid.spacing();
        let lo: f64 = self.values[..band].iter().map(|v| v.norm_sqr()).sum();
        let hi: f64 = self.values[n - band..].iter().map(|v| v.norm_sqr()).sum();
        (lo + hi) * dx
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    pub state: GridState,
    /// |‖ψ(t_final)‖² − ‖ψ(t₀)‖²|
    pub norm_drift: f64,
    /// Largest edge mass seen during the run.
    pub max_edge_mass: f64,
}

/// ⟨a|b⟩ on a shared grid (rectangle rule).
pub fn overlap(a: &[Complex64], b: &[Complex64], dx: f64) -> Complex64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        * dx
}

/// A box holding `spec` with ±12 position spreads over the whole run `[t0, t1]`.
pub fn run_grid(
    params: &OscParams,
    spec: &StateSpec,
    t0: f64,
    t1: f64,
    n_points: usize,
) -> Result<Grid> {
    let samples = 64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..=samples {
        let t = t0 + (t1 - t0) * k as f64 / samples as f64;
        let state = spec.build(params, t)?;
        let (center, spread) = state.position_moments()?;
        let reach = DEFAULT_SIGMAS * spread;
        lo = lo.min(center - reach);
        hi = hi.max(center + reach);
    }
    Grid::new(0.5 * (lo + hi), 0.5 * (hi - lo), n_points)
}

/// Crank–Nicolson evolution of grid samples under the damped Hamiltonian.
///
/// Dirichlet walls sit one spacing outside the grid; the Laplacian is the
/// three-point stencil and the `e^{∓γt}` factors are frozen at each half step.
pub fn propagate_oracle(
    params: &OscParams,
    initial: &GridState,
    t_final: f64,
    n_steps: usize,
) -> Result<Propagation> {
    if n_steps == 0 {
        return Err(TcsError::InvalidArgument(
            "n_steps must be at least 1".into(),
        ));
    }
    let grid = initial.grid;
    let n = grid.n_points();
    let dx = grid.spacing();
    let dt = (t_final - initial.t) / n_steps as f64;
    let (m, g, w0, hbar) = (params.m(), params.gamma(), params.omega0(), params.hbar());
    let xs = grid.points();
    let i = Complex64::i();

    let mut psi = initial.values.clone();
    let norm0 = initial.norm_sq();
    let mut max_edge = initial.edge_mass();
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    let mut c_prime = vec![Complex64::new(0.0, 0.0); n];

    for step in 0..n_steps {
        let t_mid = initial.t + (step as f64 + 0.5) * dt;
        let kin = (-g * t_mid).exp() * hbar * hbar / (2.0 * m * dx * dx);
        let pot = 0.5 * (g * t_mid).exp() * m * w0 * w0;
        // H ψ_j = kin (2ψ_j − ψ_{j−1} − ψ_{j+1}) + V_j ψ_j
        let factor = i * dt / (2.0 * hbar);
        let off = -factor * kin;
        for j in 0..n {
            let diag_h = 2.0 * kin + pot * xs[j] * xs[j];
            let left = if j > 0 {
                psi[j - 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let right = if j + 1 < n {
                psi[j + 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            rhs[j] = (1.0 - factor * diag_h) * psi[j] - off * (left + right);
        }
        // (1 + factor H) ψ' = rhs, Thomas algorithm with constant off-diagonal
        let diag = |j: usize| 1.0 + factor * (2.0 * kin + pot * xs[j] * xs[j]);
        c_prime[0] = off / diag(0);
        rhs[0] /= diag(0);
        for j in 1..n {
            let denom = diag(j) - off * c_prime[j - 1];
            c_prime[j] = off / denom;
            rhs[j] = (rhs[j] - off * rhs[j - 1]) / denom;
        }
        psi[n - 1] = rhs[n - 1];
        for j in (0..n - 1).rev() {
            psi[j] = rhs[j] - c_prime[j] * psi[j + 1];
        }
        if psi.iter().any(|v| !v.is_finite()) {
            return Err(TcsError::Divergence { step });
        }
        if step % 64 == 63 || step + 1 == n_steps {
            let edge = GridState {
                grid,
                t: t_mid,
                values: psi.clone(),
            }
            .edge_mass();
            max_edge = max_edge.max(edge);
            if edge > EDGE_MASS_LIMIT {
                return Err(TcsError::BoxTooSmall {
                    edge_mass: edge,
                    limit: EDGE_MASS_LIMIT,
                });
            }
        }
    }
    let state = GridState {
        grid,
        t: t_final,
        values: psi,
    };
    let norm_drift = (state.norm_sq() - norm0).abs();
    Ok(Propagation {
        state,
        norm_drift,
        max_edge_mass: max_edge,
    })
}

/// Evolves the analytic `spec` state from `t0` to `t1` and returns the CN
/// result with the analytic state at `t1` sampled on the same grid.
pub fn propagate_spec(
    params: &OscParams,
    spec: &StateSpec,
    t1: f64,
    n_steps: usize,
    n_points: usize,
) -> Result<(Propagation, Vec<Complex64>)> {
    let grid = run_grid(params, spec, 0.0, t1, n_points)?;
    let start = spec.build_on(params, dynamics::phase_state(params, 0.0)?)?;
    let initial = GridState {
        grid,
        t: 0.0,
        values: start.evaluate_grid(&grid),
    };
    let run = propagate_oracle(params, &initial, t1, n_steps)?;
    let exact = spec.build(params, t1)?.evaluate_grid(&grid);
    Ok((run, exact))
}

/// Self-convergence of the propagator in time: runs with `base_steps`,
/// `2·base_steps` and `4·base_steps` on one grid and returns
/// `‖ψ₁ − ψ₂‖ / ‖ψ₂ − ψ₄‖`, which tends to 4 for a second-order scheme.
pub fn time_convergence_ratio(
    params: &OscParams,
    spec: &StateSpec,
    t1: f64,
    n_points: usize,
    base_steps: usize,
) -> Result<f64> {
    let grid = run_grid(params, spec, 0.0, t1, n_points)?;
    let start = spec.build_on(params, dynamics::phase_state(params, 0.0)?)?;
    let initial = GridState {
        grid,
        t: 0.0,
        values: start.evaluate_grid(&grid),
    };
    let runs = [1, 2, 4]
        .iter()
        .map(|k| propagate_oracle(params, &initial, t1, k * base_steps).map(|r| r.state.values))
        .collect::<Result<Vec<_>>>()?;
    let gap = |a: &[Complex64], b: &[Complex64]| {
        let diff: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        l2_norm(&diff, grid.spacing())
    };
    Ok(gap(&runs[0], &runs[1]) / gap(&runs[1], &runs[2]))
}
