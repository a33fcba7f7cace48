//! Finite-difference residual of the time-dependent Schrödinger equation for
//! the analytic states across the overdamped battery window, and the same
//! residual with the prefactor on the wrong square-root branch.
//!
//! ```text
//! cargo run --release --example schrodinger_residual
//! ```

use ck_tcs::battery::sample_times;
use ck_tcs::verify::{default_grid, schrodinger_residual_with, ResidualOptions, StateSpec};
use ck_tcs::OscParams;

fn main() -> ck_tcs::Result<()> {
    let params = OscParams::with_mu(1.0, 4.0, 1.0, 1.0, 0.5, 1.0, 0.5)?;
    let wrong = ResidualOptions {
        conjugate_branch: true,
        ..Default::default()
    };
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>10} {:>12}",
        "t", "fock0", "fock1", "fock2", "fock3", "conj fock0"
    );
    for t in sample_times(&params, 9) {
        let mut line = format!("{t:>8.3}");
        for n in 0..=3 {
            let spec = StateSpec::Fock(n);
            let grid = default_grid(&spec.build(&params, t)?)?;
            let r = schrodinger_residual_with(
                &params,
                &spec,
                &grid,
                t,
                1e-4,
                ResidualOptions::default(),
            )?;
            line += &format!(" {:>10.2e}", r.rel_l2);
        }
        let spec = StateSpec::Fock(0);
        let grid = default_grid(&spec.build(&params, t)?)?;
        let conj = schrodinger_residual_with(&params, &spec, &grid, t, 1e-4, wrong)?;
        println!("{line} {:>12.2e}", conj.rel_l2);
    }
    Ok(())
}
