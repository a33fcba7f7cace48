//! Variances and the uncertainty product of Fock and coherent states over
//! time, with the closed-form g(t) next to the direct result.
//!
//! ```text
//! cargo run --example uncertainty
//! ```

use ck_tcs::observables::{expectations_cs, uncertainty_products};
use ck_tcs::OscParams;
use num_complex::Complex64;

fn main() -> ck_tcs::Result<()> {
    let params = OscParams::with_mu(1.0, 0.4, 1.0, 1.0, 2.0, 1.0, 0.0)?;
    println!("theta = {:?}, mu = {:?}", params.theta(), params.mu());
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12}",
        "t", "g", "prod n=0", "prod n=2", "prod cs"
    );
    for k in 0..=12 {
        let t = 0.5 * k as f64;
        let ground = uncertainty_products(&params, 0, t)?;
        let second = uncertainty_products(&params, 2, t)?;
        let cs = expectations_cs(&params, Complex64::new(0.7, -0.3), t)?;
        println!(
            "{t:>6.2} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
            ground.g_value.unwrap_or(f64::NAN),
            ground.product_tcs,
            second.product_tcs,
            cs.product
        );
    }
    Ok(())
}
