use serde::{Deserialize, Serialize};

use super::state::{Recording, Trajectory};
use crate::error::{Error, Result};
use crate::spectral::{SobolevIndex, SobolevWeights};

/// Smallest admissible denominator `‖φ(t)‖`.
pub const NORM_FLOOR: f64 = 1e-300;

/// Relative error `ρ(t)` sampled along a trajectory pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorCurve {
    pub times: Vec<f64>,
    pub rho: Vec<f64>,
}

impl ErrorCurve {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `ρ(t) = ‖φ̃(t) - φ(t)‖_{H^s} / ‖φ(t)‖_{H^s}` at each common sample.
///
/// Both trajectories must be recorded with full state on the same sample times.
pub fn relative_error_curve(
    reference: &Trajectory,
    truth: &Trajectory,
    s: SobolevIndex,
) -> Result<ErrorCurve> {
    if reference.recording() != Recording::FullState || truth.recording() != Recording::FullState {
        return Err(Error::TrajectoryMismatch(
            "relative error needs full-state trajectories".into(),
        ));
    }
    if reference.len() != truth.len() {
        return Err(Error::TrajectoryMismatch(format!(
            "{} samples vs {}",
            reference.len(),
            truth.len()
        )));
    }
    let mut weights: Option<SobolevWeights> = None;
    let mut curve = ErrorCurve {
        times: Vec::with_capacity(truth.len()),
        rho: Vec::with_capacity(truth.len()),
    };
    for (r, t) in reference.samples().iter().zip(truth.samples()) {
        if (r.time - t.time).abs() > 1e-12 * t.time.abs().max(1.0) {
            return Err(Error::TrajectoryMismatch(format!(
                "sample times differ: {} vs {}",
                r.time, t.time
            )));
        }
        let (Some(approx), Some(exact)) = (&r.phi, &t.phi) else {
            unreachable!("full-state samples carry fields")
        };
        let weights = weights.get_or_insert_with(|| SobolevWeights::new(exact.grid(), s));
        let approx_hat = approx.to_spectral();
        let exact_hat = exact.to_spectral();
        let denom = weights.norm(exact_hat.values());
        if denom < NORM_FLOOR {
            return Err(Error::VanishingNorm { time: t.time });
        }
        let num = weights.distance(approx_hat.values(), exact_hat.values());
        curve.times.push(t.time);
        curve.rho.push(num / denom);
    }
    Ok(curve)
}
