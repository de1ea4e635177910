use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::ErrorCurve;

/// First time at which `ρ` reaches `epsilon`.
///
/// The bracketing samples are interpolated linearly in `(log t, log ρ)`,
/// which is exact for power laws. When the lower sample has `t = 0` or
/// `ρ = 0`, plain linear interpolation is used instead.
pub fn find_crossing(curve: &ErrorCurve, epsilon: f64) -> Result<f64> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::param(
            "epsilon",
            format!("must be > 0, got {epsilon}"),
        ));
    }
    let horizon = curve.times.last().copied().unwrap_or(0.0);
    let points = curve.times.iter().zip(&curve.rho);
    let mut prev: Option<(f64, f64)> = None;
    for (&t, &rho) in points {
        if rho >= epsilon {
            let Some((t0, r0)) = prev else {
                // Already above tolerance at the first sample.
                return Ok(t);
            };
            if r0 >= epsilon {
                continue;
            }
            if rho == epsilon {
                return Ok(t);
            }
            if t0 > 0.0 && r0 > 0.0 {
                let frac = (epsilon.ln() - r0.ln()) / (rho.ln() - r0.ln());
                return Ok((t0.ln() + frac * (t.ln() - t0.ln())).exp());
            }
            let frac = (epsilon - r0) / (rho - r0);
            return Ok(t0 + frac * (t - t0));
        }
        prev = Some((t, rho));
    }
    Err(Error::NoCrossing { epsilon, horizon })
}

/// One `(α, δ)` cell of the sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingRecord {
    pub alpha: f64,
    pub delta: f64,
    pub epsilon: f64,
    /// `None` when no crossing was found; see `failure`.
    pub t_cross: Option<f64>,
    pub failure: Option<String>,
}

impl CrossingRecord {
    pub fn is_usable(&self) -> bool {
        self.t_cross.is_some_and(|t| t.is_finite() && t > 0.0)
    }
}
