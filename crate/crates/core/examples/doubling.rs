//! Doubling: `w = v^k cyc(v)^k` keeps the closed gaps of `v` and closes
//! new ones at the band-function values for theta = j / (2k).
//!
//! cargo run --example doubling

use gapscope::families::{analyze, double_construct};
use gapscope::{CoefficientVector, Rational, Scalar};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (base, k) in [(vec![0, 2], 2), (vec![0, 5, 0, -5], 2), (vec![0, 2], 3)] {
        let v = CoefficientVector::dso(base.iter().map(|&x| Rational::from_int(x)).collect())?;
        let inst = double_construct(&v, k)?;
        let (report, check) = analyze(&inst)?;
        println!("{v}, k = {k}: period {} with g = {}", inst.vector.period(), report.closed_gap_count);
        for (p, ok) in inst.predicted.iter().zip(&check.certified) {
            println!("    predicted {:+.12} sign {:+}: {}", p.energy, p.sign, if *ok { "certified" } else { "missing" });
        }
    }
    Ok(())
}
