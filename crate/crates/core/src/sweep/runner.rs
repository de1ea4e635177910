use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{Comparator, SweepConfig};
use super::crossing::{find_crossing, CrossingRecord};
use super::regression::{linear_fit, regress_loglog, LinearFit, RegressionResult};
use crate::error::{Error, Result};
use crate::evolution::{
    evolve_ep_observed, evolve_nls_observed, CompositeTilde, EPState, ErrorCurve, ModeMixer,
    NORM_FLOOR,
};
use crate::io::csv::{curve_from_csv, curve_to_csv, format_float, write_atomic};
use crate::spectral::{apply_free_phase, gaussian_initial, Grid, SobolevWeights};
use crate::theory::{beta_predict, BetaPrediction, BetaRegime, Model};

/// Identifies one simulation pair. `epsilon` is set only for the composite
/// comparator, whose switch time depends on ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveKey {
    pub delta: f64,
    pub epsilon: Option<f64>,
}

impl CurveKey {
    fn bits(&self) -> (u64, Option<u64>) {
        (self.delta.to_bits(), self.epsilon.map(f64::to_bits))
    }

    /// File name inside the per-config cache directory.
    pub fn file_name(&self) -> String {
        match self.epsilon {
            None => format!("delta={}.csv", format_float(self.delta)),
            Some(e) => format!(
                "delta={},epsilon={}.csv",
                format_float(self.delta),
                format_float(e)
            ),
        }
    }
}

fn hex_digest(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// SHA-256 of the settings a curve depends on.
pub fn config_hash(config: &SweepConfig) -> String {
    hex_digest(&config.fingerprint())
}

/// Content hash of one curve: the config fingerprint plus the key.
pub fn curve_cache_key(config: &SweepConfig, key: &CurveKey) -> String {
    let mut text = config.fingerprint();
    text.push_str("|delta=");
    text.push_str(&format_float(key.delta));
    if let Some(e) = key.epsilon {
        text.push_str("|epsilon=");
        text.push_str(&format_float(e));
    }
    hex_digest(&text)
}

/// Error curves shared across α values and, optionally, across runs on disk
/// under `<root>/curves/<config hash>/`.
#[derive(Debug, Default)]
pub struct CurveCache {
    root: Option<PathBuf>,
    memory: Mutex<HashMap<(String, u64, Option<u64>), Arc<ErrorCurve>>>,
    simulations: AtomicUsize,
}

impl CurveCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn on_disk(root: impl Into<PathBuf>) -> Self {
        CurveCache {
            root: Some(root.into()),
            ..Self::default()
        }
    }

    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    /// Number of simulation pairs actually run through this cache.
    pub fn simulations(&self) -> usize {
        self.simulations.load(Ordering::Relaxed)
    }

    pub fn curve_path(&self, config: &SweepConfig, key: &CurveKey) -> Option<PathBuf> {
        self.root.as_ref().map(|r| {
            r.join("curves")
                .join(config_hash(config))
                .join(key.file_name())
        })
    }

    /// Returns the cached curve or simulates it; the flag is true on a cache hit.
    pub fn get_or_simulate(
        &self,
        config: &SweepConfig,
        grid: &Arc<Grid>,
        key: CurveKey,
    ) -> Result<(Arc<ErrorCurve>, bool)> {
        let (d, e) = key.bits();
        let map_key = (config_hash(config), d, e);
        if let Some(c) = self.memory.lock().expect("cache lock").get(&map_key) {
            return Ok((c.clone(), true));
        }
        let path = self.curve_path(config, &key);
        if let Some(curve) = path
            .as_ref()
            .and_then(|p| fs::read_to_string(p).ok())
            .and_then(|text| curve_from_csv(&text).ok())
        {
            let curve = Arc::new(curve);
            self.memory
                .lock()
                .expect("cache lock")
                .insert(map_key, curve.clone());
            return Ok((curve, true));
        }
        let curve = Arc::new(simulate_error_curve(config, grid, key)?);
        self.simulations.fetch_add(1, Ordering::Relaxed);
        if let Some(p) = &path {
            write_atomic(p, &curve_to_csv(&curve))?;
        }
        self.memory
            .lock()
            .expect("cache lock")
            .insert(map_key, curve.clone());
        Ok((curve, false))
    }
}

fn relative_error(
    weights: &SobolevWeights,
    reference: &[Complex64],
    truth: &[Complex64],
    t: f64,
) -> Result<f64> {
    let denom = weights.norm(truth);
    if !(denom >= NORM_FLOOR) {
        return Err(Error::VanishingNorm { time: t });
    }
    Ok(weights.distance(reference, truth) / denom)
}

/// Runs the nonlinear model and its comparator from `δ·exp(-|x|²/2)` and
/// records `ρ(t; δ)` at the configured cadence.
pub fn simulate_error_curve(
    config: &SweepConfig,
    grid: &Arc<Grid>,
    key: CurveKey,
) -> Result<ErrorCurve> {
    let params = &config.params;
    let phi0 = gaussian_initial(grid, key.delta)?;
    let phi0_hat = phi0.to_spectral().into_values();
    let weights = SobolevWeights::new(grid, params.s);
    let mut curve = ErrorCurve {
        times: Vec::new(),
        rho: Vec::new(),
    };
    match config.model {
        Model::Ep => {
            let composite = match config.comparator {
                Comparator::Composite { c1 } => {
                    let eps = key.epsilon.ok_or_else(|| {
                        Error::param(
                            "epsilon",
                            "the composite comparator needs a tolerance per curve",
                        )
                    })?;
                    Some(CompositeTilde::new(&phi0, params, c1, eps)?)
                }
                _ => None,
            };
            let initial = EPState::photon_only(phi0);
            evolve_ep_observed(&initial, params, &config.step, config.horizon, |stepper| {
                let t = stepper.time();
                let reference = match &composite {
                    Some(c) => c.phi_hat_at(t),
                    None => {
                        let mut phi = phi0_hat.clone();
                        let mut psi = vec![Complex64::new(0.0, 0.0); phi.len()];
                        ModeMixer::new(grid, params, t).apply(&mut phi, &mut psi);
                        phi
                    }
                };
                curve
                    .rho
                    .push(relative_error(&weights, &reference, stepper.phi_hat(), t)?);
                curve.times.push(t);
                Ok(())
            })?;
        }
        Model::Nls => {
            evolve_nls_observed(&phi0, params, &config.step, config.horizon, |t, stepper| {
                let mut reference = phi0_hat.clone();
                apply_free_phase(grid, &mut reference, t);
                let truth = stepper.field().to_spectral();
                curve
                    .rho
                    .push(relative_error(&weights, &reference, truth.values(), t)?);
                curve.times.push(t);
                Ok(())
            })?;
        }
    }
    Ok(curve)
}

/// Outcome of one simulation job.
#[derive(Debug, Clone, Serialize)]
pub struct CurveOutcome {
    pub key: CurveKey,
    #[serde(skip)]
    pub curve: Option<Arc<ErrorCurve>>,
    pub from_cache: bool,
    pub failure: Option<String>,
}

fn curve_keys(config: &SweepConfig, cells: &[(f64, f64, f64)]) -> Vec<CurveKey> {
    let per_epsilon = matches!(config.comparator, Comparator::Composite { .. });
    let mut keys: Vec<CurveKey> = cells
        .iter()
        .filter(|c| c.2 >= config.epsilon_floor)
        .map(|&(_, delta, eps)| CurveKey {
            delta,
            epsilon: per_epsilon.then_some(eps),
        })
        .collect();
    keys.sort_by(|a, b| {
        a.delta.total_cmp(&b.delta).then(
            a.epsilon
                .unwrap_or(0.0)
                .total_cmp(&b.epsilon.unwrap_or(0.0)),
        )
    });
    keys.dedup_by(|a, b| a.bits() == b.bits());
    keys
}

fn run_keys(
    config: &SweepConfig,
    cache: &CurveCache,
    keys: &[CurveKey],
) -> Result<Vec<CurveOutcome>> {
    let grid = config.grid()?;
    let job = |key: &CurveKey| match cache.get_or_simulate(config, &grid, *key) {
        Ok((curve, hit)) => CurveOutcome {
            key: *key,
            curve: Some(curve),
            from_cache: hit,
            failure: None,
        },
        Err(e) => CurveOutcome {
            key: *key,
            curve: None,
            from_cache: false,
            failure: Some(e.to_string()),
        },
    };
    if config.workers <= 1 {
        return Ok(keys.iter().map(job).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::param("workers", e.to_string()))?;
    Ok(pool.install(|| keys.par_iter().map(job).collect()))
}

/// One curve per distinct amplitude needed by the sweep, ordered by δ.
pub fn run_error_curves(config: &SweepConfig, cache: &CurveCache) -> Result<Vec<CurveOutcome>> {
    config.validate()?;
    run_keys(config, cache, &curve_keys(config, &config.cells()))
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaRow {
    pub alpha: f64,
    pub fit: Option<RegressionResult>,
    pub failure: Option<String>,
    pub prediction: BetaPrediction,
}

/// Everything Algorithm A produces.
#[derive(Debug, Clone, Serialize)]
pub struct AlgorithmAReport {
    pub config_hash: String,
    pub curves: Vec<CurveOutcome>,
    pub crossings: Vec<CrossingRecord>,
    pub betas: Vec<BetaRow>,
    /// Fit of β_α against α over the exact-regime rows; needs two of them.
    pub meta_fit: Option<LinearFit>,
    pub theory_slope: f64,
    pub theory_intercept: f64,
    /// Simulation pairs run by this call (cache hits excluded).
    pub simulations: usize,
}

impl AlgorithmAReport {
    /// True when every cell crossed and every α produced a slope.
    pub fn is_complete(&self) -> bool {
        self.crossings.iter().all(CrossingRecord::is_usable)
            && self.betas.iter().all(|b| b.fit.is_some())
    }
}

/// Theoretical slope and intercept of β against α.
pub fn theory_meta_line(model: Model, p: f64) -> (f64, f64) {
    match model {
        Model::Nls => (-(p - 1.0), 1.0),
        Model::Ep => (-(p - 1.0) / (p + 2.0), 1.0 / (p + 2.0)),
    }
}

/// Both loops of Algorithm A: crossings per `(α, δ)`, a log-log fit per α,
/// and the fit of β_α against α. Per-cell failures are recorded, not raised.
pub fn run_algorithm_a(config: &SweepConfig, cache: &CurveCache) -> Result<AlgorithmAReport> {
    config.validate()?;
    let before = cache.simulations();
    let cells = config.cells();
    let curves = run_keys(config, cache, &curve_keys(config, &cells))?;
    let per_epsilon = matches!(config.comparator, Comparator::Composite { .. });

    let crossings: Vec<CrossingRecord> = cells
        .iter()
        .map(|&(alpha, delta, epsilon)| {
            let mut record = CrossingRecord {
                alpha,
                delta,
                epsilon,
                t_cross: None,
                failure: None,
            };
            if epsilon < config.epsilon_floor {
                record.failure = Some(
                    Error::EpsilonBelowFloor {
                        epsilon,
                        floor: config.epsilon_floor,
                    }
                    .to_string(),
                );
                return record;
            }
            let key = CurveKey {
                delta,
                epsilon: per_epsilon.then_some(epsilon),
            };
            let outcome = curves
                .iter()
                .find(|c| c.key.bits() == key.bits())
                .expect("every admissible cell has a curve job");
            match (&outcome.curve, &outcome.failure) {
                (Some(curve), _) => match find_crossing(curve, epsilon) {
                    Ok(t) => record.t_cross = Some(t),
                    Err(e) => record.failure = Some(e.to_string()),
                },
                (None, failure) => record.failure = failure.clone(),
            }
            record
        })
        .collect();

    let mut alphas: Vec<f64> = cells.iter().map(|c| c.0).collect();
    alphas.dedup();
    let betas = alphas
        .iter()
        .map(|&alpha| {
            let rows: Vec<CrossingRecord> = crossings
                .iter()
                .filter(|r| r.alpha == alpha)
                .cloned()
                .collect();
            let (fit, failure) = match regress_loglog(alpha, &rows) {
                Ok(f) => (Some(f), None),
                Err(e) => (None, Some(e.to_string())),
            };
            Ok(BetaRow {
                alpha,
                fit,
                failure,
                prediction: beta_predict(alpha, config.params.p, config.model)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (xs, ys): (Vec<f64>, Vec<f64>) = betas
        .iter()
        .filter(|b| b.prediction.regime == BetaRegime::Exact)
        .filter_map(|b| b.fit.map(|f| (b.alpha, f.slope)))
        .unzip();
    let meta_fit = linear_fit(&xs, &ys).ok();
    let (theory_slope, theory_intercept) = theory_meta_line(config.model, config.params.p);

    Ok(AlgorithmAReport {
        config_hash: config_hash(config),
        curves,
        crossings,
        betas,
        meta_fit,
        theory_slope,
        theory_intercept,
        simulations: cache.simulations() - before,
    })
}
