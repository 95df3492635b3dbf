//! Floquet eigenvalues against band functions from the discriminant.
//!
//! cargo run --example floquet

use gapscope::spectrum::{band_function, floquet_crosscheck, floquet_eigenvalues};
use gapscope::CoefficientVector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = CoefficientVector::jacobi(vec![1.0, 2.0, 0.5, 1.5], vec![0.0, 1.0, -0.5, 0.25])?;
    for i in 0..=4 {
        let theta = i as f64 / 8.0;
        let direct = floquet_eigenvalues(&c, theta);
        let via_d = band_function(&c, theta)?;
        println!("theta = {theta:.3}");
        for (x, y) in direct.iter().zip(&via_d) {
            println!("  {x:+.12}  {y:+.12}");
        }
    }
    let grid: Vec<f64> = (0..17).map(|i| i as f64 / 16.0).collect();
    println!("max deviation on a 17-point grid: {:.2e}", floquet_crosscheck(&c, &grid)?);
    Ok(())
}
