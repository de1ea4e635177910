//! One exciton-polariton trajectory from a Gaussian photon pulse.
//!
//! Writes nothing to disk; prints the photon and exciton Sobolev norms and
//! the conserved total mass at a coarse cadence.

use polariton::evolution::{evolve_ep, EPState, ModelParams, Recording, StepSpec};
use polariton::spectral::{gaussian_initial, make_grid};

pub fn main() {
    let grid = make_grid(1, 256, 10.0).expect("grid");
    let params = ModelParams::default();
    let initial = EPState::photon_only(gaussian_initial(&grid, 1.0).expect("initial data"));
    let step = StepSpec::new(1e-3, 4).expect("step");

    let traj = evolve_ep(&initial, &params, &step, 2.0, Recording::NormsOnly).expect("evolution");
    println!(
        "{:>6} {:>12} {:>12} {:>18}",
        "t", "|phi|_H1", "|psi|_H1", "mass"
    );
    for s in traj.samples() {
        println!(
            "{:>6.2} {:>12.8} {:>12.8} {:>18.15}",
            s.time, s.norm_phi, s.norm_psi, s.mass
        );
    }
}
