//! A seeded random census, then injection of a family witness.
//!
//! cargo run --release --example census -- [model] [p] [n] [seed]

use gapscope::census::{run_census, CensusConfig, InjectedWitness};
use gapscope::families::{make_family, FamilyId, FamilySpec, FamilyInstance};
use gapscope::{Backend, Model};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let model: Model = args.first().map(|s| s.parse()).transpose()?.unwrap_or(Model::Odjm);
    let p: usize = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(5);
    let n: usize = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(2000);
    let seed: u64 = args.get(3).map(|s| s.parse()).transpose()?.unwrap_or(7);

    let mut result = run_census(&CensusConfig::new(model, p, n, seed, Backend::Float))?;
    println!("{model} p={p}: histogram {:?}, max found {}", result.histogram, result.max_found);

    if (model, p) == (Model::Odjm, 5) {
        let inst: FamilyInstance<f64> = make_family(&FamilySpec::parse(FamilyId::OdjmP5, "")?)?;
        let w = InjectedWitness::from_instance("odjm-p5", &inst)?;
        result.inject(&w.label, w.count, inst.vector.to_json());
        println!("after injecting odjm-p5: max found {}", result.max_found);
    }
    println!("bound check passed: {}", result.bound_check.passed);
    Ok(())
}
