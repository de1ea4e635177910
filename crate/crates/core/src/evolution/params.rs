use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::SobolevIndex;

/// Physical constants of the coupled system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Nonlinear coupling `g`.
    pub g: f64,
    /// Photon-exciton coupling `γ >= 0`.
    pub gamma: f64,
    /// Exciton detuning `ω₀`.
    pub omega0: f64,
    /// Nonlinearity power `p > 1`.
    pub p: f64,
    pub s: SobolevIndex,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            g: 1.0,
            gamma: 1.0,
            omega0: 1.0,
            p: 3.0,
            s: SobolevIndex::default_for_dimension(1),
        }
    }
}

impl ModelParams {
    /// Defaults with the Sobolev index chosen for dimension `dim`.
    pub fn for_dimension(dim: usize) -> Self {
        ModelParams {
            s: SobolevIndex::default_for_dimension(dim),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.g.is_finite() {
            return Err(Error::param("g", "must be finite"));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::param(
                "gamma",
                format!("must be >= 0, got {}", self.gamma),
            ));
        }
        if !self.omega0.is_finite() {
            return Err(Error::param("omega0", "must be finite"));
        }
        if !(self.p.is_finite() && self.p > 1.0) {
            return Err(Error::param("p", format!("must be > 1, got {}", self.p)));
        }
        Ok(())
    }
}

/// Fixed-step Strang schedule with a sampling cadence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSpec {
    pub dt: f64,
    pub samples_per_unit_time: u32,
}

impl Default for StepSpec {
    fn default() -> Self {
        StepSpec {
            dt: 1e-3,
            samples_per_unit_time: 100,
        }
    }
}

impl StepSpec {
    pub fn new(dt: f64, samples_per_unit_time: u32) -> Result<Self> {
        let spec = StepSpec {
            dt,
            samples_per_unit_time,
        };
        spec.steps_per_sample()?;
        Ok(spec)
    }

    /// Number of steps between samples; the sampling interval must be an
    /// integer multiple of `dt`.
    pub fn steps_per_sample(&self) -> Result<usize> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::param("dt", format!("must be > 0, got {}", self.dt)));
        }
        if self.samples_per_unit_time == 0 {
            return Err(Error::param("samples_per_unit_time", "must be positive"));
        }
        let interval = 1.0 / self.samples_per_unit_time as f64;
        let ratio = interval / self.dt;
        let steps = ratio.round();
        if steps < 1.0 || (ratio - steps).abs() > 1e-9 * ratio {
            return Err(Error::param(
                "dt",
                format!(
                    "dt = {} does not divide the sampling interval {interval}",
                    self.dt
                ),
            ));
        }
        Ok(steps as usize)
    }

    /// Total steps to reach `horizon`; the horizon must be a whole number of steps.
    pub fn steps_to(&self, horizon: f64) -> Result<usize> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::param(
                "horizon",
                format!("must be > 0, got {horizon}"),
            ));
        }
        let ratio = horizon / self.dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::param(
                "horizon",
                format!("horizon {horizon} is not a multiple of dt = {}", self.dt),
            ));
        }
        Ok(steps as usize)
    }
}
