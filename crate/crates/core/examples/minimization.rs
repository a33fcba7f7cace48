//! Instants where the uncertainty product reaches its floor, and the
//! inverse problem: which initial width makes a chosen instant minimal.
//!
//! ```text
//! cargo run --example minimization
//! ```

use ck_tcs::observables::{g_function, minimization_times, solve_mu_for_time};
use ck_tcs::{OscParams, TcsError};

fn main() -> ck_tcs::Result<()> {
    for (gamma, mu) in [(0.4, 2.0), (4.0, 0.5)] {
        let params = OscParams::with_mu(1.0, gamma, 1.0, 1.0, mu, 0.0, 0.0)?;
        let (theta, omega, regime) = (params.theta().unwrap(), params.omega_abs(), params.regime());
        let found = minimization_times(theta, mu, omega, regime, 3)?;
        println!(
            "gamma = {gamma}, mu = {mu} ({}): {:?}",
            regime.name(),
            found.status
        );
        for t in &found.times {
            println!(
                "  t = {t:.12}  g = {:.2e}",
                g_function(theta, mu, omega, *t, regime)?
            );
        }
        for t in [0.5, 1.0, 1.5] {
            match solve_mu_for_time(theta, omega, t, regime) {
                Ok(sol) => println!("  minimal at t = {t}: mu = {:.12}", sol.mu),
                Err(e @ TcsError::NoMuSolution { .. }) => println!("  minimal at t = {t}: {e}"),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}
