//! Forward and converse checks of the closed forms at periods 4 and 5.
//!
//! cargo run --release --example characterization

use gapscope::census::characterization_check;
use gapscope::Model;

fn main() {
    for (model, p) in [(Model::Dso, 4), (Model::Odjm, 4), (Model::Dso, 5), (Model::Odjm, 5)] {
        let r = characterization_check(model, p, 25, 3);
        println!(
            "{model} p={p}: forward {}/{}, converse {}/{}, max fit error {:.1e}",
            r.forward_ok, r.forward_total, r.converse_ok, r.converse_total, r.max_fit_error
        );
        for f in &r.failures {
            println!("    {f}");
        }
    }
}
