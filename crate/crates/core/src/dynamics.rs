//! Classical trajectory, system in variations, action and energies.
//!
//! Hamilton's equations for `H = e^{-γt} p²/2m + ½ e^{γt} m ω₀² x²` are linear,
//! and the variational pair `(w, z)` obeys the same system as `(p, x)`. Both
//! are written with the kernels `C`, `S` of [`crate::kernel`]:
//!
//! ```text
//! x(t) = e^{-γt/2} [x₀ C + (p₀/m + γx₀/2) S]
//! p(t) = e^{ γt/2} [p₀ C − (γp₀/2 + mω₀²x₀) S]
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TcsError};
use crate::kernel::{continue_log_along, kernel_c, kernel_s};
use crate::params::OscParams;
use crate::quad;

/// |z| below which the variational solution is treated as a focal point.
pub const FOCAL_EPS: f64 = 1e-14;

/// Absolute tolerance of the action quadrature.
pub const ACTION_TOL: f64 = 1e-12;
/// Bisection depth limit of the action quadrature.
pub const ACTION_MAX_DEPTH: u32 = 40;

/// Classical data the wave packet is built on, at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub t: f64,
    pub x: f64,
    pub p: f64,
    pub w: Complex64,
    pub z: Complex64,
    /// Classical action ∫₀ᵗ (ẋp − H) dτ.
    pub sigma: f64,
    /// log z(t), continued from log z(0) = 0.
    pub logz: Complex64,
}

impl PhaseState {
    pub fn initial(params: &OscParams) -> Self {
        PhaseState {
            t: 0.0,
            x: params.x0(),
            p: params.p0(),
            w: params.b(),
            z: Complex64::new(1.0, 0.0),
            sigma: 0.0,
            logz: Complex64::new(0.0, 0.0),
        }
    }

    /// `z w* − z* w`; equals `−2i Im b` along exact solutions.
    pub fn skew_product(&self) -> Complex64 {
        self.z * self.w.conj() - self.z.conj() * self.w
    }

    /// Complex width `w/z` of the Gaussian envelope.
    pub fn width(&self) -> Complex64 {
        self.w / self.z
    }
}

/// Position and momentum on the classical trajectory.
pub fn trajectory(params: &OscParams, t: f64) -> (f64, f64) {
    let (m, g, w0sq) = (
        params.m(),
        params.gamma(),
        params.omega0() * params.omega0(),
    );
    let (c, s) = (
        kernel_c(params.omega_sq(), t),
        kernel_s(params.omega_sq(), t),
    );
    let (x0, p0) = (params.x0(), params.p0());
    let x = (-0.5 * g * t).exp() * (x0 * c + (p0 / m + 0.5 * g * x0) * s);
    let p = (0.5 * g * t).exp() * (p0 * c - (0.5 * g * p0 + m * w0sq * x0) * s);
    (x, p)
}

/// `(w(t), z(t))` without branch tracking.
pub fn variational_wz(params: &OscParams, t: f64) -> (Complex64, Complex64) {
    let (m, g, w0sq) = (
        params.m(),
        params.gamma(),
        params.omega0() * params.omega0(),
    );
    let (c, s) = (
        kernel_c(params.omega_sq(), t),
        kernel_s(params.omega_sq(), t),
    );
    let b = params.b();
    let w = (0.5 * g * t).exp() * (b * c - (0.5 * g * b + m * w0sq) * s);
    let z = (-0.5 * g * t).exp() * (c + (b / m + 0.5 * g) * s);
    (w, z)
}

/// `(w(t), z(t), log z(t))`, the logarithm continued along `[0, t]`.
pub fn variational(params: &OscParams, t: f64) -> Result<(Complex64, Complex64, Complex64)> {
    let (w, z) = variational_wz(params, t);
    if z.norm() < FOCAL_EPS {
        return Err(TcsError::FocalPoint { index: 0 });
    }
    let logz = continue_log_along(
        |s| variational_wz(params, s).1,
        0.0,
        Complex64::new(0.0, 0.0),
        t,
        params.path_step(),
    )?;
    Ok((w, z, logz))
}

/// Literal explicit-frequency forms of `x, p, w, z` (underdamped only).
///
/// Kept as an independent cross-check of the kernel forms.
pub fn literal_forms(params: &OscParams, t: f64) -> Option<(f64, f64, Complex64, Complex64)> {
    if params.omega_sq() <= 0.0 {
        return None;
    }
    let (m, g, b) = (params.m(), params.gamma(), params.b());
    let (x0, p0) = (params.x0(), params.p0());
    let om = params.omega_sq().sqrt();
    let (sn, cs) = (om * t).sin_cos();
    let decay = (-0.5 * g * t).exp();
    let grow = (0.5 * g * t).exp();
    let x = decay / (2.0 * m * om) * (2.0 * p0 * sn + m * (2.0 * om * cs + g * sn) * x0);
    let p = -grow / (4.0 * om)
        * ((2.0 * g * sn - 4.0 * om * cs) * p0 + m * (g * g + 4.0 * om * om) * x0 * sn);
    let w =
        -grow / (4.0 * om) * ((2.0 * b * g + m * (g * g + 4.0 * om * om)) * sn - 4.0 * b * om * cs);
    let z = decay * (cs + (2.0 * b + m * g) * sn / (2.0 * m * om));
    Some((x, p, w, z))
}

/// H(x, p, t) = e^{-γt} p²/2m + ½ e^{γt} m ω₀² x².
pub fn hamiltonian(params: &OscParams, x: f64, p: f64, t: f64) -> f64 {
    let (m, g, w0) = (params.m(), params.gamma(), params.omega0());
    (-g * t).exp() * p * p / (2.0 * m) + 0.5 * (g * t).exp() * m * w0 * w0 * x * x
}

/// L(x, ẋ, t) = e^{γt} (½ m ẋ² − ½ m ω₀² x²).
pub fn lagrangian(params: &OscParams, x: f64, xdot: f64, t: f64) -> f64 {
    let (m, g, w0) = (params.m(), params.gamma(), params.omega0());
    (g * t).exp() * (0.5 * m * xdot * xdot - 0.5 * m * w0 * w0 * x * x)
}

/// E(x, p, t) = e^{-2γt} p²/2m + ½ m ω₀² x².
pub fn mechanical_energy(params: &OscParams, x: f64, p: f64, t: f64) -> f64 {
    let (m, g, w0) = (params.m(), params.gamma(), params.omega0());
    (-2.0 * g * t).exp() * p * p / (2.0 * m) + 0.5 * m * w0 * w0 * x * x
}

/// ẋp − H along the classical trajectory.
pub fn action_integrand(params: &OscParams, t: f64) -> f64 {
    let (x, p) = trajectory(params, t);
    let xdot = (-params.gamma() * t).exp() * p / params.m();
    xdot * p - hamiltonian(params, x, p, t)
}

/// σ(t) = ∫₀ᵗ (ẋp − H) dτ.
pub fn action(params: &OscParams, t: f64) -> Result<f64> {
    action_between(params, 0.0, t)
}

/// ∫ (ẋp − H) dτ over `[t_a, t_b]`.
pub fn action_between(params: &OscParams, t_a: f64, t_b: f64) -> Result<f64> {
    // split into pieces of about one path step so the integrand is smooth on each
    let step = params.path_step();
    let n = (((t_b - t_a).abs() / step).ceil() as usize).max(1);
    let h = (t_b - t_a) / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let a = t_a + h * i as f64;
        let b = if i + 1 == n {
            t_b
        } else {
            t_a + h * (i + 1) as f64
        };
        total += quad::integrate(
            |s| action_integrand(params, s),
            a,
            b,
            ACTION_TOL / n as f64,
            ACTION_MAX_DEPTH,
        )?;
    }
    Ok(total)
}

/// Full classical snapshot at time `t`.
pub fn phase_state(params: &OscParams, t: f64) -> Result<PhaseState> {
    let (x, p) = trajectory(params, t);
    let (w, z, logz) = variational(params, t)?;
    let sigma = action(params, t)?;
    Ok(PhaseState {
        t,
        x,
        p,
        w,
        z,
        sigma,
        logz,
    })
}

/// Snapshot at `t`, continuing `sigma` and `logz` from a nearby `base`.
///
/// Finite-difference consumers use this so that neighbouring states share
/// one quadrature of the action.
pub fn phase_state_near(params: &OscParams, base: &PhaseState, t: f64) -> Result<PhaseState> {
    let (x, p) = trajectory(params, t);
    let (w, z) = variational_wz(params, t);
    if z.norm() < FOCAL_EPS {
        return Err(TcsError::FocalPoint { index: 0 });
    }
    let logz = continue_log_along(
        |s| variational_wz(params, s).1,
        base.t,
        base.logz,
        t,
        params.path_step(),
    )?;
    let sigma = base.sigma + action_between(params, base.t, t)?;
    Ok(PhaseState {
        t,
        x,
        p,
        w,
        z,
        sigma,
        logz,
    })
}

/// Snapshots at each of `times`, in order.
pub fn phase_series(params: &OscParams, times: &[f64]) -> Result<Vec<PhaseState>> {
    times.iter().map(|&t| phase_state(params, t)).collect()
}

const DIM: usize = 7;

fn rhs(params: &OscParams, t: f64, y: &[f64; DIM]) -> [f64; DIM] {
    let (m, g, w0) = (params.m(), params.gamma(), params.omega0());
    let kin = (-g * t).exp() / m;
    let pot = (g * t).exp() * m * w0 * w0;
    let (x, p) = (y[0], y[1]);
    let xdot = kin * p;
    let h = 0.5 * kin * p * p + 0.5 * pot * x * x;
    [
        xdot,
        -pot * x,
        -pot * y[4],
        -pot * y[5],
        kin * y[2],
        kin * y[3],
        xdot * p - h,
    ]
}

/// Fixed-step RK4 integration of Hamilton's equations, the system in
/// variations and the action, from the Cauchy data to `t_final`.
pub fn integrate_oracle(params: &OscParams, t_final: f64, n_steps: usize) -> Result<PhaseState> {
    if n_steps == 0 {
        return Err(TcsError::InvalidArgument(
            "n_steps must be at least 1".into(),
        ));
    }
    let b = params.b();
    let mut y = [params.x0(), params.p0(), b.re, b.im, 1.0, 0.0, 0.0];
    let h = t_final / n_steps as f64;
    let mut arg = 0.0;
    let axpy = |y: &[f64; DIM], k: &[f64; DIM], s: f64| -> [f64; DIM] {
        let mut out = *y;
        for i in 0..DIM {
            out[i] += s * k[i];
        }
        out
    };
    for step in 0..n_steps {
        let t = h * step as f64;
        let k1 = rhs(params, t, &y);
        let k2 = rhs(params, t + 0.5 * h, &axpy(&y, &k1, 0.5 * h));
        let k3 = rhs(params, t + 0.5 * h, &axpy(&y, &k2, 0.5 * h));
        let k4 = rhs(params, t + h, &axpy(&y, &k3, h));
        let z_prev = Complex64::new(y[4], y[5]);
        for i in 0..DIM {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(TcsError::Divergence { step });
        }
        let z_next = Complex64::new(y[4], y[5]);
        if z_next.norm() == 0.0 {
            return Err(TcsError::FocalPoint { index: step + 1 });
        }
        arg += (z_next / z_prev).arg();
    }
    let z = Complex64::new(y[4], y[5]);
    Ok(PhaseState {
        t: t_final,
        x: y[0],
        p: y[1],
        w: Complex64::new(y[2], y[3]),
        z,
        sigma: y[6],
        logz: Complex64::new(z.norm().ln(), arg),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn undamped() -> OscParams {
        OscParams::new(1.0, 0.0, 1.0, 1.0, Complex64::new(0.0, 1.0), 1.0, 0.0).unwrap()
    }

    fn damped() -> OscParams {
        OscParams::new(1.0, 0.4, 1.0, 1.0, Complex64::new(0.0, 1.0), 1.0, 0.5).unwrap()
    }

    #[test]
    fn initial_data() {
        for p in [undamped(), damped()] {
            let s = phase_state(&p, 0.0).unwrap();
            assert_eq!(s, PhaseState::initial(&p));
        }
    }

    #[test]
    fn quarter_period() {
        let (x, p) = trajectory(&undamped(), FRAC_PI_2);
        assert!(x.abs() < 1e-15);
        assert!((p + 1.0).abs() < 1e-15);
    }

    #[test]
    fn undamped_coherent_width() {
        let p = undamped();
        for &t in &[0.3, 1.0, 4.0] {
            let (w, z) = variational_wz(&p, t);
            let e = Complex64::from_polar(1.0, t);
            assert!((z - e).norm() < 1e-14);
            assert!((w - Complex64::i() * e).norm() < 1e-14);
        }
    }

    #[test]
    fn logz_full_period_on_second_sheet() {
        let p = undamped();
        let (_, _, logz) = variational(&p, 2.0 * PI).unwrap();
        assert!((logz - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-12);
        let phi = (-0.5 * logz).exp();
        assert!((phi + 1.0).norm() < 1e-12);
    }

    #[test]
    fn literal_forms_agree() {
        let p = OscParams::new(1.3, 0.7, 1.1, 1.0, Complex64::new(0.2, 0.8), -0.4, 0.9).unwrap();
        for i in 0..50 {
            let t = 0.21 * i as f64;
            let (xl, pl, wl, zl) = literal_forms(&p, t).unwrap();
            let (x, pp) = trajectory(&p, t);
            let (w, z) = variational_wz(&p, t);
            assert!((x - xl).abs() < 1e-13);
            assert!((pp - pl).abs() < 1e-13);
            assert!((w - wl).norm() < 1e-13 * wl.norm().max(1.0));
            assert!((z - zl).norm() < 1e-13);
        }
        assert!(literal_forms(
            &OscParams::with_mu(1.0, 4.0, 1.0, 1.0, 1.0, 0.0, 0.0).unwrap(),
            1.0
        )
        .is_none());
    }

    #[test]
    fn energies() {
        let p = damped();
        assert_eq!(hamiltonian(&p, 0.0, 0.0, 3.0), 0.0);
        let h = hamiltonian(&p, 1.0, 1.0, 1.0);
        assert!((h - ((-0.4f64).exp() / 2.0 + 0.4f64.exp() / 2.0)).abs() < 1e-15);
        let u = undamped();
        for &(x, pp, t) in &[(0.3, -1.2, 0.0), (2.0, 0.5, 7.0)] {
            assert_eq!(hamiltonian(&u, x, pp, t), mechanical_energy(&u, x, pp, t));
        }
        assert!((lagrangian(&p, 0.0, 2.0, 0.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn action_over_full_period_vanishes() {
        let u = undamped();
        assert_eq!(action(&u, 0.0).unwrap(), 0.0);
        assert!(action(&u, PI).unwrap().abs() < 1e-12);
        // -(1/4) sin 2t
        let t = 0.9;
        assert!((action(&u, t).unwrap() + 0.25 * (2.0 * t).sin()).abs() < 1e-12);
    }

    #[test]
    fn near_state_matches_fresh_state() {
        let p = damped();
        let base = phase_state(&p, 2.0).unwrap();
        let near = phase_state_near(&p, &base, 2.0 + 1e-3).unwrap();
        let fresh = phase_state(&p, 2.0 + 1e-3).unwrap();
        assert!((near.sigma - fresh.sigma).abs() < 1e-12);
        assert!((near.logz - fresh.logz).norm() < 1e-14);
    }

    #[test]
    fn oracle_zero_time_is_initial() {
        let p = damped();
        assert_eq!(
            integrate_oracle(&p, 0.0, 10).unwrap(),
            PhaseState::initial(&p)
        );
        assert!(integrate_oracle(&p, 1.0, 0).is_err());
    }
}
