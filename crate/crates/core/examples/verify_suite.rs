//! Runs the full reproduction suite and prints the pass/fail table.
//!
//! cargo run --release --example verify_suite -- [seed]

use gapscope::verify::{run_suite, SuiteConfig};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let report = run_suite(&SuiteConfig::new(seed));
    print!("{}", report.render());
    std::process::exit(if report.passed { 0 } else { 1 });
}
