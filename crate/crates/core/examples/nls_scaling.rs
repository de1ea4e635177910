//! Onset times for cubic NLS against free evolution, t ≈ C ε^{1-2α}.

use polariton::sweep::{run_algorithm_a, CurveCache, SweepConfig};
use polariton::theory::Model;

pub fn main() {
    let mut config = SweepConfig::new(Model::Nls);
    config.alphas = vec![0.0, 0.1, 0.2];
    config.workers = 4;
    let report = run_algorithm_a(&config, &CurveCache::in_memory()).expect("sweep");

    for r in report.crossings.iter().filter(|r| r.alpha == 0.0) {
        println!(
            "eps = {:.3e}: t = {:.6e}",
            r.epsilon,
            r.t_cross.unwrap_or(f64::NAN)
        );
    }
    for row in &report.betas {
        let beta = row.fit.map_or(f64::NAN, |f| f.slope);
        println!(
            "alpha = {}: beta = {beta:.4} (theory {:.4})",
            row.alpha,
            1.0 - 2.0 * row.alpha
        );
    }
}
