//! End-to-end acceptance: one line per criterion, printed past the test
//! harness capture so it shows up in plain `cargo test` output.

use std::io::Write;

use gapscope::verify::{run_criterion, SuiteConfig, CRITERIA};

fn check(id: usize) {
    let cfg = SuiteConfig::default();
    let r = run_criterion(id, &cfg);
    let line = format!(
        "acceptance {id}/{}: {:<30} {}  {}\n",
        CRITERIA.len(),
        r.name,
        if r.passed { "PASS" } else { "FAIL" },
        r.detail
    );
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    assert!(r.passed, "{}: {}", r.name, r.detail);
}

#[test]
fn exact_small_period_table() {
    check(1);
}

#[test]
fn off_diagonal_witnesses() {
    check(2);
}

#[test]
fn impossibility_at_small_periods() {
    check(3);
}

#[test]
fn doubling_construction() {
    check(4);
}

#[test]
fn lower_bound_constructions() {
    check(5);
}

#[test]
fn dual_path_consistency() {
    check(6);
}

#[test]
fn symmetry_properties() {
    check(7);
}

#[test]
fn genericity() {
    check(8);
}

#[test]
fn characterization_round_trip() {
    check(9);
}
