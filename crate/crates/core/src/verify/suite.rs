use num_complex::Complex64;

use super::VerificationSummary;
use crate::dynamics::{self, PhaseState};
use crate::error::Result;
use crate::observables::{
    expectations_cs, expectations_tcs, g_function, g_trig_complex, uncertainty_products,
    variance_closed_theta_mu, StateKind,
};
use crate::params::{OscParams, Regime};
use crate::states::{fock_on, PolyGaussian};

/// Closed-form identities (skew product, commutator, ladder) and route agreement.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Skew-product conservation: absolute, or relative to |z||w| once that exceeds 1.
pub const WRONSKIAN_TOL: f64 = 1e-10;
/// Gram-matrix deviation from the identity (closed form).
pub const GRAM_TOL: f64 = 1e-10;
/// Analytic continuation between the trig and hyperbolic g forms.
pub const CONTINUATION_TOL: f64 = 1e-10;
/// Closed form vs RK4 oracle.
pub const ODE_TOL: f64 = 1e-8;
pub const ODE_STEPS: usize = 100_000;
/// Highest Fock level in the Gram and ladder checks.
pub const MAX_LEVEL: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    /// Multiplies w(t) before the checks run; 1.0 leaves the data exact.
    pub w_scale: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { w_scale: 1.0 }
    }
}

/// All algebraic invariants with default options.
pub fn invariant_suite(params: &OscParams, t_samples: &[f64]) -> Result<VerificationSummary> {
    invariant_suite_with(params, t_samples, SuiteOptions::default())
}

fn max_coeff(state: &PolyGaussian) -> f64 {
    state.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Largest coefficient of `a − b`, relative to the largest coefficient of `b`.
pub fn coeff_gap(a: &PolyGaussian, b: &PolyGaussian) -> f64 {
    match a.add_scaled(b, Complex64::new(-1.0, 0.0)) {
        Ok(diff) => max_coeff(&diff) / max_coeff(b).max(f64::MIN_POSITIVE),
        Err(_) => f64::INFINITY,
    }
}

/// Deviation of `[â, â⁺]` from the identity on `state`.
pub fn commutator_gap(state: &PolyGaussian, literal: bool) -> f64 {
    let raise = |s: &PolyGaussian| {
        if literal {
            s.raise_literal()
        } else {
            s.raise()
        }
    };
    let ab = raise(state).lower();
    let ba = raise(&state.lower());
    match ab.add_scaled(&ba, Complex64::new(-1.0, 0.0)) {
        Ok(comm) => coeff_gap(&comm, state),
        Err(_) => f64::INFINITY,
    }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

/// Runs the skew-product, commutator, ladder, Gram, norm, route-equivalence,
/// continuation and ODE-oracle checks at each sample time.
pub fn invariant_suite_with(
    params: &OscParams,
    t_samples: &[f64],
    opts: SuiteOptions,
) -> Result<VerificationSummary> {
    let mut summary = VerificationSummary::new();
    let im_b = params.b().im;
    let phases: Vec<PhaseState> = t_samples
        .iter()
        .map(|&t| {
            dynamics::phase_state(params, t).map(|mut ph| {
                ph.w *= opts.w_scale;
                ph
            })
        })
        .collect::<Result<_>>()?;

    let mut wronskian = 0.0f64;
    let mut commutator = 0.0f64;
    let mut lowering = 0.0f64;
    let mut raising = 0.0f64;
    let mut gram = 0.0f64;
    let mut norm_in_time = 0.0f64;
    for phase in &phases {
        let conditioning = (phase.z.norm() * phase.w.norm() / im_b).max(1.0);
        let skew_err = (phase.skew_product() + Complex64::new(0.0, 2.0 * im_b)).norm();
        wronskian = wronskian.max(skew_err / (phase.z.norm() * phase.w.norm()).max(1.0));

        let ladder: Vec<PolyGaussian> = (0..=MAX_LEVEL + 1)
            .map(|n| fock_on(params, *phase, n))
            .collect::<Result<_>>()?;
        for n in 0..=MAX_LEVEL {
            commutator = commutator.max(commutator_gap(&ladder[n], true) / conditioning);
            let up = ladder[n].raise();
            raising = raising.max(coeff_gap(
                &up,
                &ladder[n + 1].scale(Complex64::new(((n + 1) as f64).sqrt(), 0.0)),
            ));
            if n > 0 {
                let down = ladder[n].lower();
                lowering = lowering.max(coeff_gap(
                    &down,
                    &ladder[n - 1].scale(Complex64::new((n as f64).sqrt(), 0.0)),
                ));
            }
            for m in 0..=n {
                let v = ladder[m].inner(&ladder[n])?;
                let expect = if m == n { 1.0 } else { 0.0 };
                gram = gram.max((v - expect).norm());
                if m == n {
                    norm_in_time = norm_in_time.max((v.re - 1.0).abs());
                }
            }
        }
    }
    summary.check_le("wronskian", wronskian, WRONSKIAN_TOL);
    summary.check_le("commutator", commutator, IDENTITY_TOL);
    summary.check_le("ladder_lowering", lowering, IDENTITY_TOL);
    summary.check_le("ladder_raising", raising, IDENTITY_TOL);
    summary.check_le("gram", gram, GRAM_TOL);
    summary.check_le("norm_in_time", norm_in_time, GRAM_TOL);

    if params.b().re == 0.0 && params.regime() != Regime::Critical {
        let mut route = 0.0f64;
        let mut floor = f64::INFINITY;
        for &t in t_samples {
            let report = uncertainty_products(params, 0, t)?;
            let g = report.g_value.unwrap_or(f64::NAN);
            for kind in [
                StateKind::Tcs(0),
                StateKind::Tcs(1),
                StateKind::Tcs(3),
                StateKind::Cs,
            ] {
                let direct = match kind {
                    StateKind::Tcs(n) => expectations_tcs(params, n, t)?,
                    StateKind::Cs => expectations_cs(params, Complex64::new(0.7, -0.3), t)?,
                };
                let (var_x, var_p) = variance_closed_theta_mu(params, kind, t)?;
                let minimum = (params.hbar() * kind.level_factor()).powi(2);
                route = route
                    .max(relative(direct.var_x, var_x))
                    .max(relative(direct.var_p, var_p))
                    .max(relative(direct.product, minimum * (1.0 + g)))
                    .max(relative(var_x * var_p, minimum * (1.0 + g)));
            }
            floor = floor.min(report.product_cs / (0.25 * params.hbar().powi(2)));
        }
        summary.check_le("route_equivalence", route, IDENTITY_TOL);
        summary.check_ge("product_floor", floor, 1.0 - IDENTITY_TOL);
    }

    if params.regime() != Regime::Critical {
        let omega = params.omega_abs();
        summary.check_le(
            "continuation_identity",
            continuation_gap(omega, 10),
            CONTINUATION_TOL,
        );
    }

    let t_ode = t_samples.iter().copied().fold(0.0, f64::max).min(10.0);
    summary.check_le("ode_oracle", ode_gap(params, t_ode, ODE_STEPS)?, ODE_TOL);
    Ok(summary)
}

/// Largest relative gap between the hyperbolic g and the trig g at
/// `(iω, −iμ, −iθ)` over an `n³` lattice of `θ ∈ [0.1, 3]`, `μ ∈ [0.2, 3]`,
/// `ωt ∈ [0, 2]`.
pub fn continuation_gap(omega: f64, n: usize) -> f64 {
    let lin = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / (n - 1) as f64;
    let mut worst = 0.0f64;
    for a in 0..n {
        let theta = lin(0.1, 3.0, a);
        for b in 0..n {
            let mu = lin(0.2, 3.0, b);
            for c in 0..n {
                let t = lin(0.0, 2.0, c) / omega;
                let hyper = g_function(theta, mu, omega, t, Regime::Overdamped).unwrap_or(f64::NAN);
                let trig = g_trig_complex(
                    Complex64::new(0.0, -theta),
                    Complex64::new(0.0, -mu),
                    Complex64::new(0.0, omega),
                    t,
                );
                let gap = (trig - hyper).norm() / hyper.abs().max(1.0);
                worst = worst.max(gap);
            }
        }
    }
    worst
}

/// Scaled deviation between closed forms and the RK4 oracle at `t`:
/// each component difference divided by max(1, |closed form|).
pub fn ode_gap(params: &OscParams, t: f64, n_steps: usize) -> Result<f64> {
    let exact = dynamics::phase_state(params, t)?;
    let oracle = dynamics::integrate_oracle(params, t, n_steps)?;
    let d = |a: f64, b: f64| (a - b).abs() / a.abs().max(1.0);
    let dc = |a: Complex64, b: Complex64| (a - b).norm() / a.norm().max(1.0);
    Ok(d(exact.x, oracle.x)
        .max(d(exact.p, oracle.p))
        .max(dc(exact.w, oracle.w))
        .max(dc(exact.z, oracle.z))
        .max(d(exact.sigma, oracle.sigma))
        .max(dc(exact.logz, oracle.logz)))
}
