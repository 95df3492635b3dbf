//! Bands and gaps of a periodic vector on both backends.
//!
//! cargo run --example band_structure

use gapscope::spectrum::band_structure;
use gapscope::{CoefficientVector, Rational, Scalar};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let exact = CoefficientVector::dso(
        [0, 5, 0, -5].iter().map(|&x| Rational::from_int(x)).collect(),
    )?;
    let float = CoefficientVector::jacobi(vec![1.0, 0.5, 2.0], vec![0.3, -1.0, 0.7])?;

    for report in [band_structure(&exact)?, band_structure(&float)?] {
        println!("period {} on the {:?} backend", report.period, report.backend);
        for b in &report.bands {
            println!("  band {}: [{:.12}, {:.12}]", b.index, b.lo, b.hi);
        }
        for g in &report.gaps {
            println!("  gap  {}: [{:.12}, {:.12}] {:?}", g.index, g.lo, g.hi, g.status);
        }
        println!("  closed gaps: {}", report.closed_gap_count);
    }
    Ok(())
}
