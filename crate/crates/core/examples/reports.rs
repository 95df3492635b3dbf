//! JSON, CSV and SVG renderings of one report, written to a temp directory.
//!
//! cargo run --example reports

use gapscope::report::{from_csv, to_csv, to_json, to_svg};
use gapscope::spectrum::band_structure;
use gapscope::{CoefficientVector, Rational, Scalar};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v: Vec<Rational> = [1, 0, 0, -1, 0, 0].iter().map(|&x| Rational::from_int(x)).collect();
    let report = band_structure(&CoefficientVector::dso(v)?)?;

    let dir = std::env::temp_dir().join("gapscope-reports");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("report.json"), to_json(&report))?;
    std::fs::write(dir.join("report.csv"), to_csv(&report))?;
    std::fs::write(dir.join("bands.svg"), to_svg(&report))?;

    print!("{}", to_csv(&report));
    assert_eq!(from_csv(&to_csv(&report))?, report);
    println!("wrote report.json, report.csv and bands.svg to {}", dir.display());
    Ok(())
}
