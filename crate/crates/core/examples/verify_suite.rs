//! The invariant and oracle checks run by `polariton verify`.

use polariton::io::{run_verify, RunConfig};
use polariton::theory::Model;

pub fn main() {
    let report = run_verify(&RunConfig::for_model(Model::Ep)).expect("verify");
    for c in &report.checks {
        println!(
            "{} {:<40} {}",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    for n in &report.notes {
        println!("note: {n}");
    }
}
