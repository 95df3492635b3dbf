//! The small-period table against family witnesses and exact censuses,
//! plus a deliberately corrupted table.
//!
//! cargo run --release --example known_table

use gapscope::census::{run_census, table_witnesses, verify_known_table, CensusConfig, KnownTable};
use gapscope::{Backend, Model};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut results = Vec::new();
    for model in [Model::Dso, Model::Odjm] {
        for p in [2, 3] {
            results.push(run_census(&CensusConfig::new(model, p, 300, 1, Backend::Exact))?);
        }
    }
    let witnesses = table_witnesses()?;
    for w in &witnesses {
        println!("{:<28} {} p={} g={}", w.label, w.model, w.period, w.count);
    }
    let report = verify_known_table(&results, &witnesses, &KnownTable::known());
    for line in &report.lines {
        println!("{} {} ({})", if line.passed { "ok  " } else { "FAIL" }, line.name, line.detail);
    }

    let mut corrupted = KnownTable::known();
    corrupted.set(Model::Odjm, 6, 2);
    println!("corrupted table passes: {}", verify_known_table(&results, &witnesses, &corrupted).passed);
    Ok(())
}
