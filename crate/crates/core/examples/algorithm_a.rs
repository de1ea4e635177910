//! Algorithm A for the exciton-polariton system at the default settings:
//! p = 3, n = 1, N = 256, L = 10, α ∈ {0, 0.1, 0.2, 0.3}, six tolerances per α.

use polariton::sweep::{run_algorithm_a, CurveCache, SweepConfig};
use polariton::theory::Model;

pub fn main() {
    let mut config = SweepConfig::new(Model::Ep);
    config.workers = 4;
    let cache = CurveCache::in_memory();
    let report = run_algorithm_a(&config, &cache).expect("sweep");

    println!("{} simulations", report.simulations);
    println!("{:>6} {:>10} {:>10} {:>8}", "alpha", "beta", "theory", "r2");
    for row in &report.betas {
        let fit = row.fit.expect("every alpha crosses within the horizon");
        println!(
            "{:>6} {:>10.5} {:>10.5} {:>8.5}",
            row.alpha,
            fit.slope,
            row.prediction.beta.unwrap_or(f64::NAN),
            fit.r_squared
        );
    }
    if let Some(meta) = report.meta_fit {
        println!(
            "beta vs alpha: slope {:.4} (theory {:.4}), intercept {:.4} (theory {:.4})",
            meta.slope, report.theory_slope, meta.intercept, report.theory_intercept
        );
    }
}
