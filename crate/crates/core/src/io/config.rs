//! TOML run configuration with `[grid]`, `[physics]`, `[sweep]`, `[solver]`
//! and `[output]` sections. Every key is optional; unknown keys are errors.
//!
//! ```toml
//! [grid]
//! dim = 1
//! points = 256
//! half_width = 10.0
//!
//! [physics]
//! model = "ep"
//! p = 3.0
//!
//! [sweep]
//! alphas = [0.0, 0.1, 0.2, 0.3]
//! epsilon_min = 1e-3
//! epsilon_max = 1e-2
//! epsilon_count = 6
//!
//! [output]
//! dir = "runs/ep"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{ModelParams, StepSpec};
use crate::spectral::{Grid, SobolevIndex, DEFAULT_MAX_POINTS};
use crate::sweep::{curve_cache_key, log_spaced, Comparator, CurveKey, SweepConfig};
use crate::theory::Model;

/// Overrides the `[output] dir` setting.
pub const OUTPUT_DIR_ENV: &str = "POLARITON_OUTPUT_DIR";
/// Overrides the `[sweep] workers` setting.
pub const WORKERS_ENV: &str = "POLARITON_WORKERS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub dim: usize,
    pub points: usize,
    pub half_width: f64,
    pub max_points: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            dim: 1,
            points: 256,
            half_width: 10.0,
            max_points: DEFAULT_MAX_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicsSection {
    pub model: Model,
    pub p: f64,
    pub g: f64,
    pub gamma: f64,
    pub omega0: f64,
    /// Sobolev index; defaults to `floor(dim/2 + 1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

impl Default for PhysicsSection {
    fn default() -> Self {
        PhysicsSection {
            model: Model::Ep,
            p: 3.0,
            g: 1.0,
            gamma: 1.0,
            omega0: 1.0,
            s: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparatorKind {
    SystemB,
    Composite,
    LinearNls,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub alphas: Vec<f64>,
    pub epsilon_min: f64,
    pub epsilon_max: f64,
    pub epsilon_count: usize,
    /// Explicit amplitudes; when absent, `δ = ε^α`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    /// Defaults to `system-b` for EP and `linear-nls` for NLS.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparator: Option<ComparatorKind>,
    /// Switch-time constant of the composite comparator.
    pub c1: f64,
    pub epsilon_floor: f64,
    pub workers: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            alphas: vec![0.0, 0.1, 0.2, 0.3],
            epsilon_min: 1e-3,
            epsilon_max: 1e-2,
            epsilon_count: 6,
            deltas: None,
            comparator: None,
            c1: 0.0,
            epsilon_floor: 1e-12,
            workers: 1,
        }
    }
}

/// Defaults depend on the model: EP uses `dt = 1e-3` to `T = 2`,
/// NLS uses `dt = 1e-5` to `T = 0.2`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples_per_unit_time: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: PathBuf::from("polariton-out"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSection,
    pub physics: PhysicsSection,
    pub sweep: SweepSection,
    pub solver: SolverSection,
    pub output: OutputSection,
}

fn invalid(key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_owned(),
        reason: reason.into(),
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(key, format!("must be finite and > 0, got {v}")))
    }
}

impl RunConfig {
    /// Parses, fills model-dependent defaults and validates.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let mut config: RunConfig =
            toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        config.fill_defaults();
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::ConfigParse(msg) => Error::ConfigParse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Defaults for `model` with every optional value filled in.
    pub fn for_model(model: Model) -> Self {
        let mut c = RunConfig::default();
        c.physics.model = model;
        c.fill_defaults();
        c
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Resolves every `None` that has a model- or dimension-dependent default.
    pub fn fill_defaults(&mut self) {
        let model = self.physics.model;
        let base = SweepConfig::new(model);
        self.physics
            .s
            .get_or_insert(SobolevIndex::default_for_dimension(self.grid.dim).value());
        self.sweep.comparator.get_or_insert(match model {
            Model::Ep => ComparatorKind::SystemB,
            Model::Nls => ComparatorKind::LinearNls,
        });
        self.solver.dt.get_or_insert(base.step.dt);
        self.solver
            .samples_per_unit_time
            .get_or_insert(base.step.samples_per_unit_time);
        self.solver.horizon.get_or_insert(base.horizon);
    }

    /// Applies `POLARITON_OUTPUT_DIR` and `POLARITON_WORKERS` from `lookup`.
    pub fn apply_overrides(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<()> {
        if let Some(dir) = lookup(OUTPUT_DIR_ENV).filter(|d| !d.is_empty()) {
            self.output.dir = PathBuf::from(dir);
        }
        if let Some(w) = lookup(WORKERS_ENV).filter(|w| !w.is_empty()) {
            self.sweep.workers = w.trim().parse().map_err(|_| {
                invalid(
                    WORKERS_ENV,
                    format!("expected a positive integer, got {w:?}"),
                )
            })?;
            if self.sweep.workers == 0 {
                return Err(invalid(WORKERS_ENV, "must be at least 1"));
            }
        }
        Ok(())
    }

    pub fn apply_env_overrides(&mut self) -> Result<()> {
        self.apply_overrides(|k| std::env::var(k).ok())
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if !(1..=3).contains(&g.dim) {
            return Err(invalid(
                "grid.dim",
                format!("must be 1, 2 or 3, got {}", g.dim),
            ));
        }
        if g.points % 2 != 0 || g.points < 4 {
            return Err(invalid(
                "grid.points",
                format!("must be even and >= 4, got {}", g.points),
            ));
        }
        positive("grid.half_width", g.half_width)?;
        Grid::new(g.dim, g.points, g.half_width, g.max_points)
            .map_err(|e| invalid("grid.points", e.to_string()))?;

        let ph = &self.physics;
        if !(ph.p.is_finite() && ph.p > 1.0) {
            return Err(invalid(
                "physics.p",
                format!("must satisfy p > 1, got {}", ph.p),
            ));
        }
        if !ph.g.is_finite() {
            return Err(invalid("physics.g", "must be finite"));
        }
        if !(ph.gamma.is_finite() && ph.gamma >= 0.0) {
            return Err(invalid(
                "physics.gamma",
                format!("must be >= 0, got {}", ph.gamma),
            ));
        }
        if !ph.omega0.is_finite() {
            return Err(invalid("physics.omega0", "must be finite"));
        }
        if let Some(s) = ph.s {
            if !(s.is_finite() && s >= 0.0) {
                return Err(invalid("physics.s", format!("must be >= 0, got {s}")));
            }
        }

        let sw = &self.sweep;
        if sw.alphas.is_empty() || sw.alphas.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(invalid(
                "sweep.alphas",
                "need at least one alpha, each >= 0",
            ));
        }
        for (key, v) in [
            ("sweep.epsilon_min", sw.epsilon_min),
            ("sweep.epsilon_max", sw.epsilon_max),
        ] {
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                return Err(invalid(key, format!("must lie in (0, 1), got {v}")));
            }
        }
        if sw.epsilon_min > sw.epsilon_max {
            return Err(invalid(
                "sweep.epsilon_min",
                "must not exceed sweep.epsilon_max",
            ));
        }
        if sw.epsilon_count == 0 {
            return Err(invalid("sweep.epsilon_count", "must be at least 1"));
        }
        if let Some(d) = &sw.deltas {
            if d.is_empty() || d.iter().any(|v| !(*v > 0.0 && *v <= 1.0)) {
                return Err(invalid("sweep.deltas", "amplitudes must lie in (0, 1]"));
            }
            if d.windows(2).any(|w| !(w[1] < w[0])) {
                return Err(invalid(
                    "sweep.deltas",
                    "amplitudes must be strictly decreasing",
                ));
            }
        }
        match (ph.model, sw.comparator) {
            (Model::Ep, Some(ComparatorKind::LinearNls)) => {
                return Err(invalid(
                    "sweep.comparator",
                    "EP runs use system-b or composite",
                ))
            }
            (Model::Nls, Some(ComparatorKind::SystemB | ComparatorKind::Composite)) => {
                return Err(invalid("sweep.comparator", "NLS runs use linear-nls"))
            }
            _ => {}
        }
        if !(sw.c1.is_finite() && sw.c1 >= 0.0) {
            return Err(invalid("sweep.c1", format!("must be >= 0, got {}", sw.c1)));
        }
        positive("sweep.epsilon_floor", sw.epsilon_floor)?;
        if sw.workers == 0 {
            return Err(invalid("sweep.workers", "must be at least 1"));
        }

        let so = &self.solver;
        if let Some(dt) = so.dt {
            positive("solver.dt", dt)?;
        }
        if let Some(h) = so.horizon {
            positive("solver.horizon", h)?;
        }
        if so.samples_per_unit_time == Some(0) {
            return Err(invalid(
                "solver.samples_per_unit_time",
                "must be at least 1",
            ));
        }
        let step = self.step_spec();
        step.steps_per_sample()
            .map_err(|e| invalid("solver.samples_per_unit_time", e.to_string()))?;
        step.steps_to(self.horizon())
            .map_err(|e| invalid("solver.horizon", e.to_string()))?;
        Ok(())
    }

    pub fn model_params(&self) -> ModelParams {
        let ph = &self.physics;
        ModelParams {
            g: ph.g,
            gamma: ph.gamma,
            omega0: ph.omega0,
            p: ph.p,
            s: ph
                .s
                .and_then(|s| SobolevIndex::new(s).ok())
                .unwrap_or_else(|| SobolevIndex::default_for_dimension(self.grid.dim)),
        }
    }

    pub fn step_spec(&self) -> StepSpec {
        let base = SweepConfig::new(self.physics.model).step;
        StepSpec {
            dt: self.solver.dt.unwrap_or(base.dt),
            samples_per_unit_time: self
                .solver
                .samples_per_unit_time
                .unwrap_or(base.samples_per_unit_time),
        }
    }

    pub fn horizon(&self) -> f64 {
        self.solver
            .horizon
            .unwrap_or_else(|| SweepConfig::new(self.physics.model).horizon)
    }

    pub fn grid(&self) -> Result<std::sync::Arc<Grid>> {
        Grid::new(
            self.grid.dim,
            self.grid.points,
            self.grid.half_width,
            self.grid.max_points,
        )
    }

    pub fn to_sweep_config(&self) -> SweepConfig {
        let sw = &self.sweep;
        let comparator = match sw.comparator {
            Some(ComparatorKind::SystemB) => Comparator::SystemB,
            Some(ComparatorKind::Composite) => Comparator::Composite { c1: sw.c1 },
            Some(ComparatorKind::LinearNls) => Comparator::LinearNls,
            None => Comparator::default_for(self.physics.model),
        };
        SweepConfig {
            model: self.physics.model,
            dim: self.grid.dim,
            points: self.grid.points,
            half_width: self.grid.half_width,
            max_points: self.grid.max_points,
            params: self.model_params(),
            alphas: sw.alphas.clone(),
            epsilons: log_spaced(sw.epsilon_min, sw.epsilon_max, sw.epsilon_count),
            deltas: sw.deltas.clone(),
            horizon: self.horizon(),
            step: self.step_spec(),
            comparator,
            epsilon_floor: sw.epsilon_floor,
            workers: sw.workers,
        }
    }
}

/// Cache key of the δ curve. Only physics and numerics enter the hash; the
/// output directory, worker count and the α/ε sets do not.
pub fn cache_key(config: &RunConfig, delta: f64) -> String {
    curve_cache_key(
        &config.to_sweep_config(),
        &CurveKey {
            delta,
            epsilon: None,
        },
    )
}
