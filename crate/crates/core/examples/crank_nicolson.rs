//! Evolves the initial ground state numerically with Crank-Nicolson and
//! compares it with the analytic state at t = 2.
//!
//! ```text
//! cargo run --release --example crank_nicolson
//! ```

use ck_tcs::verify::{overlap, propagate_spec, time_convergence_ratio, StateSpec};
use ck_tcs::OscParams;

fn main() -> ck_tcs::Result<()> {
    for gamma in [0.0, 0.4] {
        let params = OscParams::with_mu(1.0, gamma, 1.0, 1.0, 1.0, 1.0, 0.5)?;
        for spec in [StateSpec::Fock(0), StateSpec::Fock(2)] {
            let (run, exact) = propagate_spec(&params, &spec, 2.0, 20_000, 4096)?;
            let dx = run.state.grid.spacing();
            let norms = (run.state.norm_sq() * overlap(&exact, &exact, dx).re).sqrt();
            let fidelity = overlap(&run.state.values, &exact, dx).norm() / norms;
            println!(
                "gamma = {gamma} {}: 1 - |<cn|exact>| = {:.2e}, norm drift = {:.2e}",
                spec.label(),
                1.0 - fidelity,
                run.norm_drift
            );
        }
        let ratio = time_convergence_ratio(&params, &StateSpec::Fock(0), 2.0, 1024, 250)?;
        println!("  time-step halving ratio = {ratio:.3} (second order gives 4)");
    }
    Ok(())
}
