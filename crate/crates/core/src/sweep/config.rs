use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{ModelParams, StepSpec};
use crate::spectral::{Grid, DEFAULT_MAX_POINTS};
use crate::theory::Model;

/// Linear system the nonlinear photon field is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Comparator {
    /// Linear exciton system (g = 0 in EP).
    SystemB,
    /// System A until `C₁ ε^{1/2}`, then system B.
    Composite { c1: f64 },
    /// Free Schrödinger evolution, for NLS.
    LinearNls,
}

impl Comparator {
    pub fn default_for(model: Model) -> Self {
        match model {
            Model::Ep => Comparator::SystemB,
            Model::Nls => Comparator::LinearNls,
        }
    }
}

/// Everything Algorithm A needs: grid, physics, the α and ε/δ sets, and numerics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub model: Model,
    pub dim: usize,
    pub points: usize,
    pub half_width: f64,
    pub max_points: usize,
    pub params: ModelParams,
    pub alphas: Vec<f64>,
    /// Tolerances read off each curve; with `α > 0` they also fix `δ = ε^α`.
    pub epsilons: Vec<f64>,
    /// Explicit amplitude set Δ; when present, `ε = δ^{1/α}` for `α > 0`.
    pub deltas: Option<Vec<f64>>,
    pub horizon: f64,
    pub step: StepSpec,
    pub comparator: Comparator,
    pub epsilon_floor: f64,
    pub workers: usize,
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
        .collect()
}

impl SweepConfig {
    /// Defaults for `model` on a 1-D grid of 256 points over `[-10, 10)`.
    pub fn new(model: Model) -> Self {
        let (horizon, step) = match model {
            Model::Ep => (2.0, StepSpec::default()),
            Model::Nls => (
                0.2,
                StepSpec {
                    dt: 1e-5,
                    samples_per_unit_time: 10_000,
                },
            ),
        };
        SweepConfig {
            model,
            dim: 1,
            points: 256,
            half_width: 10.0,
            max_points: DEFAULT_MAX_POINTS,
            params: ModelParams::default(),
            alphas: vec![0.0, 0.1, 0.2, 0.3],
            epsilons: log_spaced(1e-3, 1e-2, 6),
            deltas: None,
            horizon,
            step,
            comparator: Comparator::default_for(model),
            epsilon_floor: 1e-12,
            workers: 1,
        }
    }

    pub fn grid(&self) -> Result<Arc<Grid>> {
        Grid::new(self.dim, self.points, self.half_width, self.max_points)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.step.steps_per_sample()?;
        self.step.steps_to(self.horizon)?;
        if self.alphas.is_empty() || self.alphas.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::param(
                "alphas",
                "need at least one finite alpha >= 0",
            ));
        }
        if self.epsilons.is_empty()
            || self
                .epsilons
                .iter()
                .any(|e| !(e.is_finite() && *e > 0.0 && *e < 1.0))
        {
            return Err(Error::param("epsilons", "need tolerances in (0, 1)"));
        }
        if let Some(deltas) = &self.deltas {
            if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0 && *d <= 1.0)) {
                return Err(Error::param("deltas", "amplitudes must lie in (0, 1]"));
            }
            if deltas.windows(2).any(|w| !(w[1] < w[0])) {
                return Err(Error::param(
                    "deltas",
                    "amplitudes must be strictly decreasing",
                ));
            }
        }
        if !(self.epsilon_floor.is_finite() && self.epsilon_floor > 0.0) {
            return Err(Error::param("epsilon_floor", "must be > 0"));
        }
        if self.workers == 0 {
            return Err(Error::param("workers", "must be at least 1"));
        }
        match (self.model, self.comparator) {
            (Model::Ep, Comparator::LinearNls) => Err(Error::param(
                "comparator",
                "the EP model compares against system B or the composite A/B",
            )),
            (Model::Nls, Comparator::SystemB | Comparator::Composite { .. }) => Err(Error::param(
                "comparator",
                "the NLS model compares against linear Schrödinger evolution",
            )),
            (_, Comparator::Composite { c1 }) if !(c1.is_finite() && c1 >= 0.0) => {
                Err(Error::param("c1", "must be >= 0"))
            }
            _ => Ok(()),
        }
    }

    /// The settings a single error curve depends on, in a fixed field order.
    pub fn fingerprint(&self) -> String {
        #[derive(Serialize)]
        struct Fingerprint<'a> {
            model: Model,
            dim: usize,
            points: usize,
            half_width: f64,
            params: &'a ModelParams,
            horizon: f64,
            step: &'a StepSpec,
            comparator: &'a Comparator,
        }
        serde_json::to_string(&Fingerprint {
            model: self.model,
            dim: self.dim,
            points: self.points,
            half_width: self.half_width,
            params: &self.params,
            horizon: self.horizon,
            step: &self.step,
            comparator: &self.comparator,
        })
        .expect("fingerprint serializes")
    }

    /// Every `(α, δ, ε)` cell of the sweep, ordered by α then increasing δ.
    pub fn cells(&self) -> Vec<(f64, f64, f64)> {
        let mut alphas = self.alphas.clone();
        alphas.sort_by(f64::total_cmp);
        alphas.dedup();
        let mut cells = Vec::new();
        for &alpha in &alphas {
            let mut row: Vec<(f64, f64, f64)> = if alpha == 0.0 {
                // δ = ε⁰ = 1: every tolerance is read off the unit-amplitude curve.
                self.epsilons.iter().map(|&e| (alpha, 1.0, e)).collect()
            } else if let Some(deltas) = &self.deltas {
                deltas
                    .iter()
                    .map(|&d| (alpha, d, d.powf(1.0 / alpha)))
                    .collect()
            } else {
                self.epsilons
                    .iter()
                    .map(|&e| (alpha, e.powf(alpha), e))
                    .collect()
            };
            row.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.2.total_cmp(&b.2)));
            cells.extend(row);
        }
        cells
    }
}
