//! Time integrators for the nonlinear EP system, its linear approximations
//! A and B, and the NLS equation, plus error and conservation diagnostics.

mod diagnostics;
mod linear;
mod params;
mod state;
mod strang;

pub use diagnostics::{relative_error_curve, ErrorCurve, NORM_FLOOR};
pub(crate) use linear::ModeMixer;
pub use linear::{
    evolve_composite_tilde, evolve_linear_b, evolve_system_a, mode_propagator, propagate_linear_b,
    CompositeTilde, RESONANCE_THRESHOLD,
};
pub use params::{ModelParams, StepSpec};
pub use state::{total_mass, uniform_times, EPState, Recording, Sample, Trajectory};
pub use strang::{
    evolve_ep, evolve_ep_observed, evolve_nls, evolve_nls_observed, nonlinear_rotation, EpStepper,
    NlsStepper,
};
