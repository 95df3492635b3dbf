//! Every registered family at its default parameters, with certification.
//!
//! cargo run --example families

use gapscope::families::{analyze, make_family, FamilyError, FamilyId, FamilySpec};
use gapscope::Rational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for id in FamilyId::ALL {
        let spec = FamilySpec::parse(id, "")?;
        let (vector, g, check) = match make_family::<Rational>(&spec) {
            Ok(inst) => {
                let (r, c) = analyze(&inst)?;
                (inst.vector.to_string(), r.closed_gap_count, c)
            }
            Err(FamilyError::Irrational(_)) => {
                let inst = make_family::<f64>(&spec)?;
                let (r, c) = analyze(&inst)?;
                (inst.vector.to_string(), r.closed_gap_count, c)
            }
            Err(e) => return Err(e.into()),
        };
        println!("{:<20} g = {g}  predictions certified: {}/{}", id.name(), check.certified_count, check.certified.len());
        println!("    {vector}");
    }
    Ok(())
}
