//! Oscillator parameters and regime classification.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TcsError};

/// Default relative tolerance (against ω₀²) below which ω² counts as zero.
pub const CRITICAL_TOL: f64 = 1e-12;

/// Damping regime, selected by the sign of ω² = ω₀² − γ²/4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    Underdamped,
    Overdamped,
    Critical,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Underdamped => "underdamped",
            Regime::Overdamped => "overdamped",
            Regime::Critical => "critical",
        }
    }
}

/// Physical constants and Cauchy data of a Caldirola–Kanai oscillator.
///
/// Constructed through [`OscParams::new`], which validates every field and
/// caches the derived frequency data. Values are immutable afterwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscParams {
    m: f64,
    gamma: f64,
    omega0: f64,
    hbar: f64,
    b: Complex64,
    x0: f64,
    p0: f64,
    omega_sq: f64,
    regime: Regime,
}

impl OscParams {
    /// Validates raw inputs and returns the parameter set.
    pub fn new(
        m: f64,
        gamma: f64,
        omega0: f64,
        hbar: f64,
        b: Complex64,
        x0: f64,
        p0: f64,
    ) -> Result<Self> {
        for (name, value) in [
            ("m", m),
            ("gamma", gamma),
            ("omega0", omega0),
            ("hbar", hbar),
            ("b.re", b.re),
            ("b.im", b.im),
            ("x0", x0),
            ("p0", p0),
        ] {
            if !value.is_finite() {
                return Err(TcsError::NonFinite { name, value });
            }
        }
        if b.im <= 0.0 {
            return Err(TcsError::NonPositiveImB(b.im));
        }
        if m <= 0.0 {
            return Err(TcsError::NonPositiveMass(m));
        }
        if hbar <= 0.0 {
            return Err(TcsError::NonPositiveHbar(hbar));
        }
        if gamma < 0.0 {
            return Err(TcsError::NegativeGamma(gamma));
        }
        let omega_sq = omega0 * omega0 - 0.25 * gamma * gamma;
        let mut params = OscParams {
            m,
            gamma,
            omega0,
            hbar,
            b,
            x0,
            p0,
            omega_sq,
            regime: Regime::Critical,
        };
        params.regime = params.classify(CRITICAL_TOL);
        Ok(params)
    }

    /// Parameters with `Re b = 0` and `Im b = μ·m·|ω|`.
    ///
    /// In the critical regime |ω| is replaced by ω₀ so that the initial
    /// width stays finite.
    pub fn with_mu(
        m: f64,
        gamma: f64,
        omega0: f64,
        hbar: f64,
        mu: f64,
        x0: f64,
        p0: f64,
    ) -> Result<Self> {
        let omega_sq = omega0 * omega0 - 0.25 * gamma * gamma;
        let scale = if omega_sq.abs() > CRITICAL_TOL * omega0 * omega0 {
            omega_sq.abs().sqrt()
        } else {
            omega0.abs()
        };
        Self::new(
            m,
            gamma,
            omega0,
            hbar,
            Complex64::new(0.0, mu * m * scale),
            x0,
            p0,
        )
    }

    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn b(&self) -> Complex64 {
        self.b
    }
    pub fn x0(&self) -> f64 {
        self.x0
    }
    pub fn p0(&self) -> f64 {
        self.p0
    }

    /// ω² = ω₀² − γ²/4.
    pub fn omega_sq(&self) -> f64 {
        self.omega_sq
    }

    /// |ω|, the modulus of the (possibly imaginary) damped frequency.
    pub fn omega_abs(&self) -> f64 {
        self.omega_sq.abs().sqrt()
    }

    /// Regime under the default tolerance.
    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn classify(&self, tol: f64) -> Regime {
        let scale = tol * self.omega0 * self.omega0;
        if self.omega_sq > scale {
            Regime::Underdamped
        } else if self.omega_sq < -scale {
            Regime::Overdamped
        } else {
            Regime::Critical
        }
    }

    /// θ = γ/(2|ω|); `None` in the critical regime.
    pub fn theta(&self) -> Option<f64> {
        match self.regime {
            Regime::Critical => None,
            _ => Some(self.gamma / (2.0 * self.omega_abs())),
        }
    }

    /// μ = Im b/(m|ω|); `None` in the critical regime.
    pub fn mu(&self) -> Option<f64> {
        match self.regime {
            Regime::Critical => None,
            _ => Some(self.b.im / (self.m * self.omega_abs())),
        }
    }

    /// Same physics with different Cauchy data for the trajectory.
    pub fn with_initial(&self, x0: f64, p0: f64) -> Result<Self> {
        Self::new(self.m, self.gamma, self.omega0, self.hbar, self.b, x0, p0)
    }

    /// Same physics with a different initial curvature `b`.
    pub fn with_b(&self, b: Complex64) -> Result<Self> {
        Self::new(
            self.m,
            self.gamma,
            self.omega0,
            self.hbar,
            b,
            self.x0,
            self.p0,
        )
    }

    /// Stable time step for dense sampling of z(t).
    pub(crate) fn path_step(&self) -> f64 {
        let rate = self
            .omega_abs()
            .max(self.gamma)
            .max(self.omega0.abs())
            .max(self.b.norm() / self.m);
        if rate > 0.0 {
            std::f64::consts::TAU / (16.0 * rate)
        } else {
            1.0
        }
    }
}

/// Builds validated parameters from raw numbers.
pub fn make_params(
    m: f64,
    gamma: f64,
    omega0: f64,
    hbar: f64,
    b: Complex64,
    x0: f64,
    p0: f64,
) -> Result<OscParams> {
    OscParams::new(m, gamma, omega0, hbar, b, x0, p0)
}

/// Underdamped if ω² > tol·ω₀², overdamped if ω² < −tol·ω₀², critical otherwise.
pub fn classify_regime(params: &OscParams, tol: f64) -> Regime {
    params.classify(tol)
}
