//! Exact certificates for closed gaps, including irrational energies.
//!
//! cargo run --example closed_gap_certificates

use gapscope::spectrum::{closed_gap_polynomials, closed_gaps_exact};
use gapscope::{CoefficientVector, Rational, Scalar};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v: Vec<Rational> = [0, 0, 0, 1, 0, 0, 0, -1].iter().map(|&x| Rational::from_int(x)).collect();
    let c = CoefficientVector::dso(v)?;

    let (gp, gm) = closed_gap_polynomials(&c)?;
    println!("G+ = {gp}");
    println!("G- = {gm}");

    for cert in closed_gaps_exact(&c)? {
        let ex = cert.exact.as_ref().expect("exact backend");
        println!(
            "E = {:+.15} sign {:+} gap {} factor {:?} in [{}, {}]{}",
            cert.energy,
            cert.sign,
            cert.gap_index,
            ex.factor,
            ex.lo,
            ex.hi,
            ex.value.as_ref().map(|v| format!(" exactly {v}")).unwrap_or_default()
        );
    }
    Ok(())
}
