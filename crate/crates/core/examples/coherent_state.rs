//! A truncated coherent state: its discarded tail, norm and how close it is
//! to an eigenstate of the lowering operator.
//!
//! ```text
//! cargo run --example coherent_state
//! ```

use ck_tcs::states::coherent_tcs;
use ck_tcs::OscParams;
use num_complex::Complex64;

fn main() -> ck_tcs::Result<()> {
    let params = OscParams::with_mu(1.0, 0.4, 1.0, 1.0, 1.0, 1.0, 0.5)?;
    let t = 1.3;
    for alpha in [
        Complex64::new(1.0, 0.0),
        Complex64::new(1.5, 0.0),
        Complex64::new(1.0, 1.0),
    ] {
        let cs = coherent_tcs(&params, alpha, t, 40)?;
        let lowered = cs.state.lower();
        let target = cs.state.scale(alpha);
        let diff = lowered.add_scaled(&target, Complex64::new(-1.0, 0.0))?;
        let defect = diff.norm_sq().sqrt();
        println!(
            "alpha = {alpha:>7}  tail = {:.2e}  norm^2 = {:.15}  |(a - alpha)psi| = {defect:.2e}",
            cs.tail_bound,
            cs.state.norm_sq()
        );
    }
    Ok(())
}
