//! Algorithm A: error curves, first crossings, and the two regressions.

mod config;
mod crossing;
mod regression;
mod runner;

pub use config::{log_spaced, Comparator, SweepConfig};
pub use crossing::{find_crossing, CrossingRecord};
pub use regression::{linear_fit, regress_loglog, LinearFit, RegressionResult};
pub use runner::{
    config_hash, curve_cache_key, run_algorithm_a, run_error_curves, simulate_error_curve,
    theory_meta_line, AlgorithmAReport, BetaRow, CurveCache, CurveKey, CurveOutcome,
};
