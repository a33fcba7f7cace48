//! Expectation values, variances and uncertainty products in closed form.
//!
//! Three independent routes are provided for the second moments:
//!
//! * the `|z|²`, `|w|²` forms, valid for any `b`;
//! * the θ, μ forms, valid for `Re b = 0` away from critical damping;
//! * the product form `minimum · (1 + g(t))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{self, FOCAL_EPS};
use crate::error::{Result, TcsError};
use crate::params::{OscParams, Regime};

/// Moments of x̂ and p̂ and the mean energy at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableSet {
    pub t: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub mean_x2: f64,
    pub mean_p2: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub mean_e: f64,
    pub product: f64,
}

/// Which family a variance refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    /// Fock trajectory-coherent state |n⟩.
    Tcs(usize),
    /// Any coherent state |α⟩.
    Cs,
}

impl StateKind {
    /// n + ½ for |n⟩, ½ for |α⟩.
    pub fn level_factor(self) -> f64 {
        match self {
            StateKind::Tcs(n) => n as f64 + 0.5,
            StateKind::Cs => 0.5,
        }
    }
}

fn wz(params: &OscParams, t: f64) -> Result<(Complex64, Complex64)> {
    let (w, z) = dynamics::variational_wz(params, t);
    if z.norm() < FOCAL_EPS {
        return Err(TcsError::FocalPoint { index: 0 });
    }
    Ok((w, z))
}

fn energy_parts(params: &OscParams, t: f64) -> (f64, f64) {
    let (m, g, w0) = (params.m(), params.gamma(), params.omega0());
    ((-2.0 * g * t).exp() / (2.0 * m), 0.5 * m * w0 * w0)
}

/// Moments in the Fock state |n⟩ at time `t`.
pub fn expectations_tcs(params: &OscParams, n: usize, t: f64) -> Result<ObservableSet> {
    let (x, p) = dynamics::trajectory(params, t);
    let (w, z) = wz(params, t)?;
    let spread = params.hbar() / params.b().im * (n as f64 + 0.5);
    let var_x = spread * z.norm_sqr();
    let var_p = spread * w.norm_sqr();
    let (kin, pot) = energy_parts(params, t);
    Ok(ObservableSet {
        t,
        mean_x: x,
        mean_p: p,
        mean_x2: x * x + var_x,
        mean_p2: p * p + var_p,
        var_x,
        var_p,
        mean_e: kin * p * p + pot * x * x + spread * (kin * w.norm_sqr() + pot * z.norm_sqr()),
        product: var_x * var_p,
    })
}

/// Moments in the coherent state |α⟩ at time `t`.
pub fn expectations_cs(params: &OscParams, alpha: Complex64, t: f64) -> Result<ObservableSet> {
    let (x, p) = dynamics::trajectory(params, t);
    let (w, z) = wz(params, t)?;
    let hbar = params.hbar();
    let im_b = params.b().im;
    // (2 Im b / ħ)^{-1/2}
    let pref = (hbar / (2.0 * im_b)).sqrt();
    let i = Complex64::i();
    let mean_x = (x - i * pref * (alpha.conj() * z - alpha * z.conj())).re;
    let mean_p = (p - i * pref * (alpha.conj() * w - alpha * w.conj())).re;
    let half = hbar / (2.0 * im_b);
    let var_x = half * z.norm_sqr();
    let var_p = half * w.norm_sqr();
    let (kin, pot) = energy_parts(params, t);
    Ok(ObservableSet {
        t,
        mean_x,
        mean_p,
        mean_x2: mean_x * mean_x + var_x,
        mean_p2: mean_p * mean_p + var_p,
        var_x,
        var_p,
        mean_e: kin * mean_p * mean_p
            + pot * mean_x * mean_x
            + half * (kin * w.norm_sqr() + pot * z.norm_sqr()),
        product: var_x * var_p,
    })
}

fn require_closed_form(params: &OscParams) -> Result<(f64, f64, f64)> {
    if params.b().re != 0.0 {
        return Err(TcsError::NonzeroReB(params.b().re));
    }
    match (params.theta(), params.mu()) {
        (Some(theta), Some(mu)) => Ok((theta, mu, params.omega_abs())),
        _ => Err(TcsError::CriticalRegime),
    }
}

/// `(Δx)², (Δp)²` from the θ, μ closed forms.
pub fn variance_closed_theta_mu(params: &OscParams, kind: StateKind, t: f64) -> Result<(f64, f64)> {
    let (theta, mu, omega) = require_closed_form(params)?;
    let level = params.hbar() * kind.level_factor();
    let (m, g) = (params.m(), params.gamma());
    let (th2, mu2) = (theta * theta, mu * mu);
    let (bx, bp) = match params.regime() {
        Regime::Underdamped => {
            let s2 = (omega * t).sin().powi(2);
            let sin2 = (2.0 * omega * t).sin();
            (
                1.0 + s2 * (th2 + mu2 - 1.0) + theta * sin2,
                1.0 + s2 * (2.0 * th2 + th2 * th2 + 1.0 + mu2 * th2 - mu2) / mu2 - theta * sin2,
            )
        }
        Regime::Overdamped => {
            let s2 = (omega * t).sinh().powi(2);
            let sinh2 = (2.0 * omega * t).sinh();
            (
                1.0 + s2 * (th2 + mu2 + 1.0) + theta * sinh2,
                1.0 + s2 * (1.0 - 2.0 * th2 + th2 * th2 + mu2 * th2 + mu2) / mu2 - theta * sinh2,
            )
        }
        Regime::Critical => unreachable!("checked by require_closed_form"),
    };
    let var_x = level * (-g * t).exp() / (mu * m * omega) * bx;
    let var_p = level * (g * t).exp() * mu * m * omega * bp;
    Ok((var_x, var_p))
}

/// g(t) for the underdamped (trig) or overdamped (hyperbolic) regime.
pub fn g_function(theta: f64, mu: f64, omega: f64, t: f64, regime: Regime) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(TcsError::NonPositiveMu(mu));
    }
    let (th2, mu2) = (theta * theta, mu * mu);
    let brace = match regime {
        Regime::Underdamped => {
            let s2 = (omega * t).sin().powi(2);
            theta / mu * (th2 + mu2 + 1.0) * s2
                + (th2 - mu2 + 1.0) / (2.0 * mu) * (2.0 * omega * t).sin()
        }
        Regime::Overdamped => {
            let s2 = (omega * t).sinh().powi(2);
            theta / mu * (th2 + mu2 - 1.0) * s2
                + (th2 - mu2 - 1.0) / (2.0 * mu) * (2.0 * omega * t).sinh()
        }
        Regime::Critical => return Err(TcsError::CriticalRegime),
    };
    Ok(brace * brace)
}

/// The trigonometric g(t) formula evaluated at complex arguments.
///
/// With `(ω, μ, θ) → (iω, −iμ, −iθ)` it reproduces the hyperbolic form.
pub fn g_trig_complex(theta: Complex64, mu: Complex64, omega: Complex64, t: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let (th2, mu2) = (theta * theta, mu * mu);
    let s = (omega * t).sin();
    let brace = theta / mu * (th2 + mu2 + one) * s * s
        + (th2 - mu2 + one) / (2.0 * mu) * (2.0 * omega * t).sin();
    brace * brace
}

/// Uncertainty products at time `t` and, where defined, g(t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub t: f64,
    pub n: usize,
    pub regime: Regime,
    pub theta: Option<f64>,
    pub mu: Option<f64>,
    /// `None` unless `Re b = 0` and the regime is not critical.
    pub g_value: Option<f64>,
    pub product_tcs: f64,
    pub product_cs: f64,
    /// Relative gap between `product_cs` and `(ħ²/4)(1 + g)`.
    pub route_gap: Option<f64>,
}

/// `ħ²(n+½)²|wz|²/(Im b)²` and `(ħ²/4)|wz|²/(Im b)²`, plus g(t) when `Re b = 0`.
pub fn uncertainty_products(params: &OscParams, n: usize, t: f64) -> Result<UncertaintyReport> {
    let (w, z) = wz(params, t)?;
    let hbar = params.hbar();
    let ratio = (w * z).norm_sqr() / params.b().im.powi(2);
    let level = n as f64 + 0.5;
    let product_tcs = hbar * hbar * level * level * ratio;
    let product_cs = 0.25 * hbar * hbar * ratio;
    let g_value = match require_closed_form(params) {
        Ok((theta, mu, omega)) => Some(g_function(theta, mu, omega, t, params.regime())?),
        Err(_) => None,
    };
    let route_gap = g_value.map(|g| {
        let via_g = 0.25 * hbar * hbar * (1.0 + g);
        (product_cs - via_g).abs() / via_g
    });
    Ok(UncertaintyReport {
        t,
        n,
        regime: params.regime(),
        theta: params.theta(),
        mu: params.mu(),
        g_value,
        product_tcs,
        product_cs,
        route_gap,
    })
}

/// Outcome attached to minimization-time and μ-solve queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroStatus {
    /// Isolated zeros of g, listed explicitly.
    Isolated,
    /// θ = 0 and μ = 1: g vanishes at every instant.
    Degenerate,
    /// Overdamped case with no second zero at positive time.
    NoSecondZero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizationTimes {
    pub times: Vec<f64>,
    pub status: ZeroStatus,
}

/// Instants where the uncertainty product is minimal (g = 0).
///
/// Underdamped: every zero in `[0, k_max π/ω]`, i.e. `πk/ω` and the
/// `arctan` family. Overdamped: `0` and, if it exists at positive time,
/// the `arctanh` instant.
pub fn minimization_times(
    theta: f64,
    mu: f64,
    omega: f64,
    regime: Regime,
    k_max: usize,
) -> Result<MinimizationTimes> {
    if !(mu > 0.0) {
        return Err(TcsError::NonPositiveMu(mu));
    }
    let (th2, mu2) = (theta * theta, mu * mu);
    match regime {
        Regime::Critical => Err(TcsError::CriticalRegime),
        Regime::Underdamped => {
            let half_period = std::f64::consts::PI / omega;
            let end = k_max as f64 * half_period;
            let mut times: Vec<f64> = (0..=k_max).map(|k| k as f64 * half_period).collect();
            if theta == 0.0 && mu == 1.0 {
                return Ok(MinimizationTimes {
                    times,
                    status: ZeroStatus::Degenerate,
                });
            }
            let base = if theta == 0.0 {
                0.5 * half_period
            } else {
                let phase = ((mu2 - th2 - 1.0) / (theta * (mu2 + th2 + 1.0))).atan();
                let b = phase / omega;
                if b < 0.0 {
                    b + half_period
                } else {
                    b
                }
            };
            let mut k = 0usize;
            loop {
                let t = base + k as f64 * half_period;
                if t > end * (1.0 + 1e-14) {
                    break;
                }
                times.push(t);
                k += 1;
            }
            times.sort_by(f64::total_cmp);
            times.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * half_period);
            Ok(MinimizationTimes {
                times,
                status: ZeroStatus::Isolated,
            })
        }
        Regime::Overdamped => {
            let den = theta * (mu2 + th2 - 1.0);
            let arg = (mu2 - th2 + 1.0) / den;
            let second = (den != 0.0 && arg.abs() < 1.0)
                .then(|| arg.atanh() / omega)
                .filter(|t| *t > 0.0);
            match second {
                Some(t) => Ok(MinimizationTimes {
                    times: vec![0.0, t],
                    status: ZeroStatus::Isolated,
                }),
                None => Ok(MinimizationTimes {
                    times: vec![0.0],
                    status: ZeroStatus::NoSecondZero,
                }),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuSolution {
    pub mu: f64,
    pub status: ZeroStatus,
}

/// The μ > 0 for which g vanishes at time `t`.
///
/// Setting the brace of g to zero gives
/// `μ² = (θ²+1)(1+θ tan ωt)/(1−θ tan ωt)` (underdamped) and
/// `μ² = (θ²−1)(1+θ tanh ωt)/(1−θ tanh ωt)` (overdamped).
pub fn solve_mu_for_time(theta: f64, omega: f64, t: f64, regime: Regime) -> Result<MuSolution> {
    let th2 = theta * theta;
    match regime {
        Regime::Critical => Err(TcsError::CriticalRegime),
        Regime::Underdamped => {
            if theta == 0.0 {
                return Ok(MuSolution {
                    mu: 1.0,
                    status: ZeroStatus::Degenerate,
                });
            }
            let tau = (omega * t).tan();
            let q = theta * tau;
            if !(q.abs() < 1.0) {
                return Err(TcsError::NoMuSolution {
                    condition: "|theta*tan(omega*t)| < 1",
                    detail: format!("|theta*tan(omega*t)| = {}", q.abs()),
                });
            }
            let mu2 = (th2 + 1.0) * (1.0 + q) / (1.0 - q);
            Ok(MuSolution {
                mu: mu2.sqrt(),
                status: ZeroStatus::Isolated,
            })
        }
        Regime::Overdamped => {
            let q = theta * (omega * t).tanh();
            let (condition, holds) = if theta > 1.0 {
                ("|theta*tanh(omega*t)| < 1 (theta > 1)", q.abs() < 1.0)
            } else {
                ("|theta*tanh(omega*t)| > 1 (0 < theta < 1)", q.abs() > 1.0)
            };
            let mu2 = (th2 - 1.0) * (1.0 + q) / (1.0 - q);
            if !holds || !(mu2 > 0.0) || !mu2.is_finite() {
                return Err(TcsError::NoMuSolution {
                    condition,
                    detail: format!("|theta*tanh(omega*t)| = {}", q.abs()),
                });
            }
            Ok(MuSolution {
                mu: mu2.sqrt(),
                status: ZeroStatus::Isolated,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(gamma: f64, mu: f64) -> OscParams {
        OscParams::with_mu(1.0, gamma, 1.0, 1.0, mu, 1.0, 0.5).unwrap()
    }

    #[test]
    fn initial_variances() {
        let p = OscParams::new(1.0, 0.4, 1.0, 1.0, Complex64::new(0.3, 0.8), 1.0, 0.5).unwrap();
        for n in 0..4 {
            let o = expectations_tcs(&p, n, 0.0).unwrap();
            let lvl = n as f64 + 0.5;
            assert!((o.var_x - lvl / 0.8).abs() < 1e-15);
            assert!((o.var_p - lvl * p.b().norm_sqr() / 0.8).abs() < 1e-15);
            assert_eq!(o.mean_x, 1.0);
        }
    }

    #[test]
    fn undamped_energy_ladder() {
        let p = OscParams::new(1.0, 0.0, 1.0, 1.0, Complex64::new(0.0, 1.0), 1.0, 0.3).unwrap();
        for n in 0..5 {
            for &t in &[0.0, 1.1, 4.0] {
                let e = expectations_tcs(&p, n, t).unwrap().mean_e;
                let expect = 0.3 * 0.3 / 2.0 + 0.5 + (n as f64 + 0.5);
                assert!((e - expect).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn coherent_reduces_to_ground() {
        let p = params(0.4, 2.0);
        for &t in &[0.0, 0.7, 3.0] {
            let a = expectations_cs(&p, Complex64::new(0.0, 0.0), t).unwrap();
            let b = expectations_tcs(&p, 0, t).unwrap();
            assert_eq!(a.mean_x, b.mean_x);
            assert_eq!(a.mean_p, b.mean_p);
            assert!((a.mean_e - b.mean_e).abs() < 1e-14 * b.mean_e);
        }
    }

    #[test]
    fn coherent_mean_oscillates_with_expected_amplitude() {
        // z = e^{it}: mean_x − x(t) = √2 · 2 Im(α* z)/2 = √2 sin(t) for α = 1
        let p = OscParams::new(1.0, 0.0, 1.0, 1.0, Complex64::new(0.0, 1.0), 0.0, 0.0).unwrap();
        for i in 0..40 {
            let t = 0.2 * i as f64;
            let o = expectations_cs(&p, Complex64::new(1.0, 0.0), t).unwrap();
            assert!((o.mean_x - 2f64.sqrt() * t.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_forms_at_t0_and_undamped() {
        let p = params(0.4, 2.0);
        let (mu, om) = (p.mu().unwrap(), p.omega_abs());
        let (vx, vp) = variance_closed_theta_mu(&p, StateKind::Tcs(2), 0.0).unwrap();
        assert!((vx - 2.5 / (mu * om)).abs() < 1e-14);
        assert!((vp - 2.5 * mu * om).abs() < 1e-14);
        let (cx, _) = variance_closed_theta_mu(&p, StateKind::Cs, 0.0).unwrap();
        assert!((cx - 0.5 / (mu * om)).abs() < 1e-14);

        let u = params(0.0, 1.0);
        for &t in &[0.3, 2.0, 9.0] {
            let (vx, _) = variance_closed_theta_mu(&u, StateKind::Tcs(1), t).unwrap();
            assert!((vx - 1.5).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_form_preconditions() {
        let p = OscParams::new(1.0, 0.4, 1.0, 1.0, Complex64::new(0.1, 1.0), 0.0, 0.0).unwrap();
        assert!(matches!(
            variance_closed_theta_mu(&p, StateKind::Cs, 1.0),
            Err(TcsError::NonzeroReB(_))
        ));
        let c = params(2.0, 1.0);
        assert_eq!(
            variance_closed_theta_mu(&c, StateKind::Cs, 1.0),
            Err(TcsError::CriticalRegime)
        );
        assert_eq!(
            g_function(0.1, 0.0, 1.0, 1.0, Regime::Underdamped),
            Err(TcsError::NonPositiveMu(0.0))
        );
    }

    #[test]
    fn g_zeros_and_undamped() {
        let (theta, mu, om) = (0.3, 1.7, 0.8);
        for k in 0..5 {
            let t = PI * k as f64 / om;
            assert!(g_function(theta, mu, om, t, Regime::Underdamped).unwrap() < 1e-28);
        }
        for i in 0..30 {
            let t = 0.37 * i as f64;
            assert_eq!(
                g_function(0.0, 1.0, 1.0, t, Regime::Underdamped).unwrap(),
                0.0
            );
        }
        assert_eq!(
            g_function(1.3, 0.7, 1.0, 0.0, Regime::Overdamped).unwrap(),
            0.0
        );
    }

    #[test]
    fn report_at_t0_is_minimal() {
        let p = params(0.4, 0.5);
        let r = uncertainty_products(&p, 0, 0.0).unwrap();
        assert!((r.product_cs - 0.25).abs() < 1e-15);
        assert_eq!(r.g_value, Some(0.0));
        let q = OscParams::new(1.0, 0.4, 1.0, 1.0, Complex64::new(0.5, 1.0), 0.0, 0.0).unwrap();
        let r = uncertainty_products(&q, 0, 0.0).unwrap();
        assert!((r.product_cs - 0.25 * 1.25).abs() < 1e-15);
        assert_eq!(r.g_value, None);
    }

    #[test]
    fn minimization_examples() {
        let p = OscParams::new(
            1.0,
            0.4,
            1.0,
            1.0,
            Complex64::new(0.0, 0.96f64.sqrt()),
            0.0,
            0.0,
        )
        .unwrap();
        let (th, mu, om) = (p.theta().unwrap(), p.mu().unwrap(), p.omega_abs());
        let found = minimization_times(th, mu, om, Regime::Underdamped, 2).unwrap();
        assert_eq!(found.times.len(), 5);
        for t in [0.0, PI / om, 2.0 * PI / om] {
            assert!(found.times.iter().any(|s| (s - t).abs() < 1e-14));
        }
        for &t in &found.times {
            assert!(g_function(th, mu, om, t, Regime::Underdamped).unwrap() < 1e-12);
        }

        let over = minimization_times(1.2, 0.8, 1.0, Regime::Overdamped, 3).unwrap();
        assert_eq!(over.times[0], 0.0);

        let degenerate = minimization_times(0.0, 1.0, 1.0, Regime::Underdamped, 2).unwrap();
        assert_eq!(degenerate.status, ZeroStatus::Degenerate);
        let no_theta = minimization_times(0.0, 2.0, 1.0, Regime::Underdamped, 2).unwrap();
        for &t in &no_theta.times {
            assert!(g_function(0.0, 2.0, 1.0, t, Regime::Underdamped).unwrap() < 1e-28);
        }
        assert_eq!(no_theta.times.len(), 5);
    }

    #[test]
    fn solve_mu_examples() {
        for k in 0..3 {
            let t = PI * k as f64 / 0.9;
            let s = solve_mu_for_time(0.4, 0.9, t, Regime::Underdamped).unwrap();
            assert!((s.mu - (0.16f64 + 1.0).sqrt()).abs() < 1e-12);
        }
        let t = 1.2;
        let err = solve_mu_for_time(2.0, 1.0, t, Regime::Underdamped).unwrap_err();
        assert!(matches!(err, TcsError::NoMuSolution { .. }));
        let s = solve_mu_for_time(2.0, 1.0, 0.3, Regime::Overdamped).unwrap();
        assert!(g_function(2.0, s.mu, 1.0, 0.3, Regime::Overdamped).unwrap() < 1e-12);
        assert_eq!(
            solve_mu_for_time(0.0, 1.0, 0.77, Regime::Underdamped)
                .unwrap()
                .status,
            ZeroStatus::Degenerate
        );
    }
}
