//! Runs the invariant suite on every battery point and prints a one-line
//! tally per point, then the failures if any.
//!
//! ```text
//! cargo run --release --example verify_suite
//! ```

use ck_tcs::battery::{battery, sample_times};
use ck_tcs::verify::invariant_suite;

fn main() -> ck_tcs::Result<()> {
    let mut failed = 0;
    for point in battery() {
        let summary = invariant_suite(&point.params, &sample_times(&point.params, 7))?;
        let bad: Vec<_> = summary.failures().collect();
        println!(
            "{:<20} {:>3} checks, {} failed",
            point.label(),
            summary.checks().len(),
            bad.len()
        );
        for c in &bad {
            println!(
                "    {} measured {:.3e} tol {:.3e}",
                c.name, c.measured, c.tolerance
            );
        }
        failed += bad.len();
    }
    println!("{failed} failures");
    Ok(())
}
