//! Free Schrödinger propagation of a Gaussian on a periodic box.
//!
//! The linear flow is a phase per Fourier mode, so every Sobolev norm is
//! conserved while the packet spreads in physical space.

use polariton::spectral::{
    free_propagate, gaussian_initial, make_grid, physical_l2_norm_sq, sobolev_norm, SobolevIndex,
};

pub fn main() {
    let grid = make_grid(1, 256, 10.0).expect("grid");
    let phi0 = gaussian_initial(&grid, 1.0).expect("initial data");
    let h1 = SobolevIndex::new(1.0).unwrap();

    println!(
        "{:>6} {:>12} {:>12} {:>10}",
        "t", "|phi|_L2", "|phi|_H1", "peak"
    );
    for t in [0.0, 0.5, 1.0, 2.0] {
        let phi = free_propagate(&phi0, t).expect("free flow");
        let peak = phi.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        println!(
            "{t:>6.2} {:>12.9} {:>12.9} {peak:>10.6}",
            physical_l2_norm_sq(&phi).sqrt(),
            sobolev_norm(&phi, h1)
        );
    }
    // ‖exp(-x²/2)‖_{L²} = π^{1/4}
    println!("exact L2 norm: {:.9}", std::f64::consts::PI.powf(0.25));
}
