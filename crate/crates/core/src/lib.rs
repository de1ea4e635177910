//! Short-time nonlinear onset in the exciton-polariton system and the
//! nonlinear Schrödinger equation.
//!
//! The crate simulates the photon/exciton pair
//!
//! ```text
//! i φ_t = -Δφ + γψ
//! i ψ_t = (ω₀ + g|ψ|^{p-1})ψ + γφ
//! ```
//!
//! on a periodic box with a Strang split-step Fourier scheme, compares it
//! against its linear counterpart, and measures how long the photon field
//! stays within a relative tolerance ε of the linear prediction. Sweeping
//! the amplitude `ε^α` recovers the scaling `t = C ε^β`.
//!
//! Modules:
//! - [`spectral`]: grids, transforms, Sobolev norms, free propagation.
//! - [`evolution`]: integrators for the nonlinear and linear systems.
//! - [`theory`]: the scalar bound equation, β predictions, bound constants.
//! - [`sweep`]: crossing-time extraction and the α/β regression harness.
//! - [`io`]: configuration, caching, output files and the command line.

pub mod error;
pub mod evolution;
pub mod io;
pub mod spectral;
pub mod sweep;
pub mod theory;

pub use error::{Error, Result};
