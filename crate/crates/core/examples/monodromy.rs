//! Transfer matrices, the monodromy and the discriminant polynomial.
//!
//! cargo run --example monodromy

use gapscope::jacobi::{discriminant, monodromy_numeric, monodromy_poly, transfer_matrix};
use gapscope::{CoefficientVector, Rational, Scalar};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b = transfer_matrix(&2.0, &0.5)?;
    println!("B(2, 1/2) = {:?}, det = {}", b.entries(), b.det());

    let q = |n: i64, d: i64| Rational::from_ratio(n, d);
    let c = CoefficientVector::jacobi(vec![q(1, 1), q(2, 1), q(1, 2)], vec![q(0, 1), q(1, 3), q(-1, 1)])?;
    let m = monodromy_poly(&c);
    println!("P11 = {}\nP12 = {}\nP21 = {}\nP22 = {}\ns = {}", m.p11, m.p12, m.p21, m.p22, m.s);

    let d = discriminant(&c);
    println!("D(E) = ({}) / {}", d.poly, d.s);
    for e in [q(-1, 1), q(0, 1), q(5, 2)] {
        let phi = monodromy_numeric(&c, &e);
        println!("E = {e}: trace Phi = {}, D(E) = {}, det Phi = {}", phi.trace(), d.eval(&e), phi.det());
    }
    Ok(())
}
