use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    physical_l2_norm_sq, Field, Grid, Representation, SobolevIndex, SobolevWeights,
};

/// Photon and exciton fields at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct EPState {
    pub phi: Field,
    pub psi: Field,
    pub time: f64,
}

impl EPState {
    pub fn new(phi: Field, psi: Field, time: f64) -> Result<Self> {
        if **phi.grid() != **psi.grid() {
            return Err(Error::GridMismatch);
        }
        if !(time.is_finite() && time >= 0.0) {
            return Err(Error::param("time", format!("must be >= 0, got {time}")));
        }
        Ok(EPState { phi, psi, time })
    }

    /// Photon field `phi0` with the exciton at rest, at `t = 0`.
    pub fn photon_only(phi0: Field) -> Self {
        let psi = Field::zeros(phi0.grid().clone(), Representation::Physical);
        EPState {
            phi: phi0,
            psi,
            time: 0.0,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.phi.grid()
    }

    pub fn to_physical(&self) -> EPState {
        EPState {
            phi: self.phi.to_physical(),
            psi: self.psi.to_physical(),
            time: self.time,
        }
    }
}

/// `Σ_j (|φ_j|² + |ψ_j|²) dx^n`.
pub fn total_mass(state: &EPState) -> f64 {
    physical_l2_norm_sq(&state.phi) + physical_l2_norm_sq(&state.psi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Recording {
    FullState,
    NormsOnly,
}

/// One recorded instant of a trajectory.
#[derive(Debug, Clone)]
pub struct Sample {
    pub time: f64,
    pub norm_phi: f64,
    /// Zero for single-field (NLS) trajectories.
    pub norm_psi: f64,
    pub mass: f64,
    /// Physical-space photon field, present under [`Recording::FullState`].
    pub phi: Option<Field>,
    pub psi: Option<Field>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    recording: Recording,
    sobolev: SobolevIndex,
    samples: Vec<Sample>,
}

impl Trajectory {
    pub(crate) fn new(recording: Recording, sobolev: SobolevIndex) -> Self {
        Trajectory {
            recording,
            sobolev,
            samples: Vec::new(),
        }
    }

    pub(crate) fn push_state(&mut self, state: &EPState, weights: &SobolevWeights) -> Result<()> {
        self.push_fields(state.time, &state.phi, Some(&state.psi), weights)
    }

    pub(crate) fn push_fields(
        &mut self,
        time: f64,
        phi: &Field,
        psi: Option<&Field>,
        weights: &SobolevWeights,
    ) -> Result<()> {
        if let Some(last) = self.samples.last() {
            if !(time > last.time) {
                return Err(Error::TrajectoryMismatch(format!(
                    "sample times must increase: {time} after {}",
                    last.time
                )));
            }
        }
        let norm_phi = weights.norm(phi.to_spectral().values());
        let norm_psi = psi.map_or(0.0, |f| weights.norm(f.to_spectral().values()));
        let mass = physical_l2_norm_sq(phi) + psi.map_or(0.0, physical_l2_norm_sq);
        let full = self.recording == Recording::FullState;
        self.samples.push(Sample {
            time,
            norm_phi,
            norm_psi,
            mass,
            phi: full.then(|| phi.to_physical()),
            psi: if full {
                psi.map(Field::to_physical)
            } else {
                None
            },
        });
        Ok(())
    }

    pub fn recording(&self) -> Recording {
        self.recording
    }

    pub fn sobolev(&self) -> SobolevIndex {
        self.sobolev
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.time).collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }
}

/// `0, 1/c, 2/c, ...` up to and including `horizon` (when it lands on the grid).
pub fn uniform_times(horizon: f64, samples_per_unit_time: u32) -> Vec<f64> {
    let cadence = samples_per_unit_time as f64;
    let count = (horizon * cadence * (1.0 + 1e-12)).floor() as usize;
    (0..=count).map(|i| i as f64 / cadence).collect()
}
