//! Periodic grids, spectral transforms, Sobolev norms and the free
//! Schrödinger propagator.

mod field;
mod grid;
mod norm;

pub(crate) use field::{check_finite, forward_in_place, inverse_in_place};
pub use field::{gaussian_initial, spectral_transform, Direction, Field, Representation};
pub use grid::{make_grid, Grid, DEFAULT_MAX_POINTS, MIN_POINTS_PER_AXIS};
pub(crate) use norm::apply_free_phase;
pub use norm::{free_propagate, physical_l2_norm_sq, sobolev_norm, SobolevIndex, SobolevWeights};
