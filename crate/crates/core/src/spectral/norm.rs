use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{Field, Representation};
use super::grid::Grid;
use crate::error::{Error, Result};

/// Sobolev regularity index `s >= 0`; `s = 0` is the L² norm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SobolevIndex(f64);

impl SobolevIndex {
    pub const L2: SobolevIndex = SobolevIndex(0.0);

    pub fn new(s: f64) -> Result<Self> {
        if s.is_finite() && s >= 0.0 {
            Ok(SobolevIndex(s))
        } else {
            Err(Error::param(
                "s",
                format!("Sobolev index must be >= 0, got {s}"),
            ))
        }
    }

    /// Least integer greater than `n/2`.
    pub fn default_for_dimension(dim: usize) -> Self {
        SobolevIndex((dim as f64 / 2.0 + 1.0).floor())
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Precomputed weights `(1 + |k|²)^s` on a grid.
#[derive(Debug, Clone)]
pub struct SobolevWeights {
    weights: Vec<f64>,
    inv_box_volume: f64,
}

impl SobolevWeights {
    pub fn new(grid: &Grid, s: SobolevIndex) -> Self {
        let weights = grid
            .k_squared()
            .iter()
            .map(|&k2| {
                if s.0 == 0.0 {
                    1.0
                } else {
                    (1.0 + k2).powf(s.0)
                }
            })
            .collect();
        SobolevWeights {
            weights,
            inv_box_volume: 1.0 / grid.box_volume(),
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Squared norm of spectral coefficients.
    pub fn norm_sq(&self, spectral: &[Complex64]) -> f64 {
        self.inv_box_volume
            * self
                .weights
                .iter()
                .zip(spectral)
                .map(|(w, v)| w * v.norm_sqr())
                .sum::<f64>()
    }

    pub fn norm(&self, spectral: &[Complex64]) -> f64 {
        self.norm_sq(spectral).sqrt()
    }

    /// Norm of `a - b` without allocating the difference.
    pub fn distance(&self, a: &[Complex64], b: &[Complex64]) -> f64 {
        (self.inv_box_volume
            * self
                .weights
                .iter()
                .zip(a.iter().zip(b))
                .map(|(w, (x, y))| w * (x - y).norm_sqr())
                .sum::<f64>())
        .sqrt()
    }
}

/// `((2L)^{-n} Σ_k (1+|k|²)^s |û_k|²)^{1/2}`. Physical fields are transformed first.
pub fn sobolev_norm(field: &Field, s: SobolevIndex) -> f64 {
    let weights = SobolevWeights::new(field.grid(), s);
    match field.representation() {
        Representation::Spectral => weights.norm(field.values()),
        Representation::Physical => weights.norm(field.to_spectral().values()),
    }
}

/// Discrete L² norm squared computed in physical space, `Σ_j |u_j|² dx^n`.
pub fn physical_l2_norm_sq(field: &Field) -> f64 {
    match field.representation() {
        Representation::Physical => {
            field.grid().cell_volume() * field.values().iter().map(|v| v.norm_sqr()).sum::<f64>()
        }
        Representation::Spectral => physical_l2_norm_sq(&field.to_physical()),
    }
}

/// Multiplies each spectral coefficient by `e^{-i|k|²t}`; exact for every `t`.
pub fn free_propagate(field: &Field, t: f64) -> Result<Field> {
    if field.representation() != Representation::Physical {
        return Err(Error::RepresentationMismatch {
            expected: Representation::Physical,
            found: field.representation(),
        });
    }
    let mut hat = field.to_spectral();
    apply_free_phase(field.grid(), hat.values_mut(), t);
    Ok(hat.to_physical())
}

pub(crate) fn apply_free_phase(grid: &Grid, spectral: &mut [Complex64], t: f64) {
    for (v, &k2) in spectral.iter_mut().zip(grid.k_squared()) {
        *v *= Complex64::cis(-k2 * t);
    }
}
