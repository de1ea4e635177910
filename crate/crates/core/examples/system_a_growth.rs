//! Early exciton growth under system A against the full nonlinear solver.
//!
//! For small t the exciton grows linearly, ‖ψ(t)‖ ≈ γ M t with M = ‖φ₀‖.

use polariton::evolution::{evolve_system_a, EPState, EpStepper, ModelParams, Recording};
use polariton::spectral::{gaussian_initial, make_grid, sobolev_norm};

pub fn main() {
    let grid = make_grid(1, 256, 10.0).expect("grid");
    let params = ModelParams::default();
    let phi0 = gaussian_initial(&grid, 1.0).expect("initial data");
    let m = sobolev_norm(&phi0, params.s);

    let times = [1e-3, 1e-2, 1e-1];
    let a = evolve_system_a(&phi0, &params, &times, Recording::NormsOnly).expect("system A");

    println!("{:>8} {:>14} {:>14}", "t", "A ratio", "EP ratio");
    for (sample, &t) in a.samples().iter().zip(&times) {
        let dt = t / 1000.0;
        let mut ep =
            EpStepper::new(&EPState::photon_only(phi0.clone()), &params, dt).expect("stepper");
        ep.advance(1000).expect("steps");
        let psi = ep.state().psi;
        let linear = params.gamma * m * t;
        println!(
            "{t:>8.0e} {:>14.9} {:>14.9}",
            sample.norm_psi / linear,
            sobolev_norm(&psi, params.s) / linear
        );
    }
}
