//! Exact polynomial arithmetic: gcd, square-free part, Sturm isolation.
//!
//! cargo run --example polynomial_roots

use gapscope::{Polynomial, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // (E^2 - 2)(E - 1)^2 (E + 3)
    let p: Polynomial<Rational> = Polynomial::from_i64s(&[-6, 10, 1, -7, 1, 1]);
    let q: Polynomial<Rational> = Polynomial::from_i64s(&[-2, 0, 1]);
    println!("p = {p}");
    println!("gcd(p, E^2 - 2) = {}", p.gcd(&q)?);
    println!("square-free part = {}", p.squarefree_part()?);
    for b in p.isolate_real_roots()? {
        let root = p.refine_root(&b, 1e-14)?;
        let rational = p.rational_root_in(&b)?;
        println!("root in [{}, {}]: {:.14}{}", b.lo, b.hi, gapscope::Scalar::as_f64(&root),
            rational.map(|r| format!(" = {r}")).unwrap_or_default());
    }
    Ok(())
}
