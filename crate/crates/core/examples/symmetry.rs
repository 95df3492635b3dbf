//! Reflection symmetry of off-diagonal vectors and shift/scale covariance.
//!
//! cargo run --example symmetry

use gapscope::jacobi::discriminant;
use gapscope::spectrum::{closed_gaps_float, reflection_report};
use gapscope::{CoefficientVector, Rational, Scalar};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = |xs: &[i64]| xs.iter().map(|&x| Rational::from_int(x)).collect::<Vec<_>>();
    for a in [q(&[1, 2, 2, 1]), q(&[1, 2, 3, 4]), q(&[1, 2, 3, 4, 5])] {
        let c = CoefficientVector::odjm(a)?;
        let r = reflection_report(&c)?;
        let d = discriminant(&c).poly;
        println!("{c}: D(-E) = (-1)^p D(E): {}, zero is {:?}", r.symmetric, r.zero_status);
        println!("    D = {d}");
    }

    let v = CoefficientVector::dso(vec![0.0, 5.0, 0.0, -5.0])?;
    let shifted = v.shift_potential(&1.5);
    let e0 = closed_gaps_float(&v, 1e-8)?[0].energy;
    let e1 = closed_gaps_float(&shifted, 1e-8)?[0].energy;
    println!("shift by 1.5 moves the closed gap from {e0} to {e1}");

    let a = CoefficientVector::odjm(vec![1.0, 2.0, 2.0, 1.0, 2.0 / 7f64.sqrt(), 2.0 / 7f64.sqrt()])?;
    let scaled = a.scale_offdiag(&3.0)?;
    let before: Vec<f64> = closed_gaps_float(&a, 1e-8)?.iter().map(|g| g.energy).collect();
    let after: Vec<f64> = closed_gaps_float(&scaled, 1e-8)?.iter().map(|g| g.energy).collect();
    println!("scale by 3 maps closed gaps {before:.9?} to {after:.9?}");
    Ok(())
}
