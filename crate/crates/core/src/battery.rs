//! The reference parameter battery used by the verification suites.
//!
//! γ ∈ {0, 0.4, 1.9, 2, 4} × μ ∈ {0.5, 1, 2} with m = ħ = ω₀ = 1,
//! x₀ = 1, p₀ = 0.5 and Re b = 0. γ = 2 is critically damped; there
//! `Im b = μ m ω₀`.

use crate::params::OscParams;

pub const GAMMAS: [f64; 5] = [0.0, 0.4, 1.9, 2.0, 4.0];
pub const MUS: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryPoint {
    pub gamma: f64,
    pub mu: f64,
    pub params: OscParams,
}

impl BatteryPoint {
    pub fn label(&self) -> String {
        format!("gamma={}_mu={}", self.gamma, self.mu)
    }
}

pub fn battery() -> Vec<BatteryPoint> {
    GAMMAS
        .iter()
        .flat_map(|&gamma| {
            MUS.iter().map(move |&mu| BatteryPoint {
                gamma,
                mu,
                params: OscParams::with_mu(1.0, gamma, 1.0, 1.0, mu, 1.0, 0.5)
                    .expect("battery parameters are valid"),
            })
        })
        .collect()
}

/// 6π / max(|ω|, ω₀).
pub fn time_window(params: &OscParams) -> f64 {
    6.0 * std::f64::consts::PI / params.omega_abs().max(params.omega0().abs())
}

/// `n` evenly spaced times covering `[0, time_window]`.
pub fn sample_times(params: &OscParams, n: usize) -> Vec<f64> {
    let end = time_window(params);
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|k| end * k as f64 / (n - 1) as f64).collect(),
    }
}
