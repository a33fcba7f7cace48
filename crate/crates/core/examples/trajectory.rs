//! Classical trajectory, variational pair and mechanical energy of a
//! damped oscillator in each regime.
//!
//! ```text
//! cargo run --example trajectory
//! ```

use ck_tcs::dynamics::{mechanical_energy, phase_series};
use ck_tcs::OscParams;
use num_complex::Complex64;

fn main() -> ck_tcs::Result<()> {
    for gamma in [0.4, 2.0, 4.0] {
        let params = OscParams::new(1.0, gamma, 1.0, 1.0, Complex64::new(0.0, 1.0), 1.0, 0.5)?;
        println!("gamma = {gamma} ({})", params.regime().name());
        println!(
            "{:>6} {:>12} {:>12} {:>12} {:>12}",
            "t", "x", "p", "|z|", "E"
        );
        let times: Vec<f64> = (0..=8).map(|k| 0.5 * k as f64).collect();
        for s in phase_series(&params, &times)? {
            let e = mechanical_energy(&params, s.x, s.p, s.t);
            println!(
                "{:>6.2} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                s.t,
                s.x,
                s.p,
                s.z.norm(),
                e
            );
        }
        println!();
    }
    Ok(())
}
