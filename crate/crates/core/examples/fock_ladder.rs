//! Builds trajectory-coherent Fock states with the raising operator and
//! checks orthonormality and the ladder relations at a later time.
//!
//! ```text
//! cargo run --example fock_ladder
//! ```

use ck_tcs::states::fock_tcs;
use ck_tcs::verify::coeff_gap;
use ck_tcs::OscParams;
use num_complex::Complex64;

fn main() -> ck_tcs::Result<()> {
    let params = OscParams::with_mu(1.0, 0.4, 1.0, 1.0, 1.5, 0.3, -0.2)?;
    let t = 2.7;
    let states = (0..=5)
        .map(|n| fock_tcs(&params, n, t))
        .collect::<ck_tcs::Result<Vec<_>>>()?;

    println!("Gram matrix <m|n> at t = {t}:");
    for a in &states {
        let row = states
            .iter()
            .map(|b| a.inner(b).map(|v| v.norm()))
            .collect::<ck_tcs::Result<Vec<_>>>()?;
        println!(
            "  {}",
            row.iter()
                .map(|v| format!("{v:9.2e}"))
                .collect::<Vec<_>>()
                .join(" ")
        );
    }

    println!("ladder relations (relative coefficient gap):");
    for n in 1..states.len() {
        let lowered = states[n].lower();
        let expected = states[n - 1].scale(Complex64::new((n as f64).sqrt(), 0.0));
        let raised = states[n - 1].raise();
        let up = states[n].scale(Complex64::new((n as f64).sqrt(), 0.0));
        println!(
            "  a|{n}> - sqrt({n})|{}> : {:.2e}   a+|{}> - sqrt({n})|{n}> : {:.2e}",
            n - 1,
            coeff_gap(&lowered, &expected),
            n - 1,
            coeff_gap(&raised, &up)
        );
    }
    Ok(())
}
