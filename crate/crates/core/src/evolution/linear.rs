//! Exact solutions of the linear systems.
//!
//! System B couples each Fourier mode pair through the Hermitian matrix
//! `H_k = [[|k|², γ], [γ, ω₀]]`, so `(φ̂_k, ψ̂_k)(t) = exp(-i t H_k) (φ̂_k, ψ̂_k)(0)`.
//! System A drops the back-coupling of ψ onto φ.

use num_complex::Complex64;

use super::params::ModelParams;
use super::state::{EPState, Recording, Trajectory};
use crate::error::{Error, Result};
use crate::spectral::{Field, Grid, Representation, SobolevWeights};

/// Below this detuning `|ω₀ - |k|²|` system A uses its series form.
pub const RESONANCE_THRESHOLD: f64 = 1e-8;

/// Entries of the symmetric unitary `exp(-i t H) = [[a, b], [b, c]]` for a
/// real symmetric `H = [[k2, γ], [γ, ω₀]]`.
pub fn mode_propagator(k2: f64, gamma: f64, omega0: f64, t: f64) -> [Complex64; 3] {
    let mean = 0.5 * (k2 + omega0);
    let half_split = 0.5 * (k2 - omega0);
    let r = half_split.hypot(gamma);
    let (sin_rt, cos_rt) = (r * t).sin_cos();
    // sin(rt)/r, with the r -> 0 limit t
    let sinc = if r == 0.0 { t } else { sin_rt / r };
    let phase = Complex64::cis(-mean * t);
    [
        phase * Complex64::new(cos_rt, -half_split * sinc),
        phase * Complex64::new(0.0, -gamma * sinc),
        phase * Complex64::new(cos_rt, half_split * sinc),
    ]
}

/// Per-mode propagator coefficients for a fixed time increment.
#[derive(Debug, Clone)]
pub(crate) struct ModeMixer {
    coefficients: Vec<[Complex64; 3]>,
}

impl ModeMixer {
    pub(crate) fn new(grid: &Grid, params: &ModelParams, t: f64) -> Self {
        ModeMixer {
            coefficients: grid
                .k_squared()
                .iter()
                .map(|&k2| mode_propagator(k2, params.gamma, params.omega0, t))
                .collect(),
        }
    }

    pub(crate) fn apply(&self, phi_hat: &mut [Complex64], psi_hat: &mut [Complex64]) {
        for ((u, v), [a, b, c]) in phi_hat
            .iter_mut()
            .zip(psi_hat.iter_mut())
            .zip(&self.coefficients)
        {
            let (x, y) = (*u, *v);
            *u = a * x + b * y;
            *v = b * x + c * y;
        }
    }
}

/// Advances `state` by `t` under system B, exactly. `t = 0` returns the input unchanged.
pub fn propagate_linear_b(state: &EPState, params: &ModelParams, t: f64) -> Result<EPState> {
    params.validate()?;
    if t == 0.0 {
        return Ok(state.clone());
    }
    let mut phi = state.phi.to_spectral();
    let mut psi = state.psi.to_spectral();
    ModeMixer::new(state.grid(), params, t).apply(phi.values_mut(), psi.values_mut());
    Ok(EPState {
        phi: phi.to_physical(),
        psi: psi.to_physical(),
        time: state.time + t,
    })
}

fn check_times(times: &[f64], start: f64) -> Result<()> {
    if times.is_empty() {
        return Err(Error::param("sample times", "need at least one sample"));
    }
    if !(times[0] >= start) || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::param(
            "sample times",
            format!("must be finite and start at or after {start}"),
        ));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("sample times", "must be strictly increasing"));
    }
    Ok(())
}

/// Exact system-B trajectory evaluated at the absolute `times`.
pub fn evolve_linear_b(
    initial: &EPState,
    params: &ModelParams,
    times: &[f64],
    recording: Recording,
) -> Result<Trajectory> {
    params.validate()?;
    check_times(times, initial.time)?;
    let weights = SobolevWeights::new(initial.grid(), params.s);
    let mut traj = Trajectory::new(recording, params.s);
    for &t in times {
        let state = propagate_linear_b(initial, params, t - initial.time)?;
        traj.push_state(&state, &weights)?;
    }
    Ok(traj)
}

/// `(e^{iθ} - 1)/(iθ) · t` with `θ = (ω₀ - |k|²) t`, switching to a 3-term
/// series near resonance.
fn duhamel_kernel(detuning: f64, t: f64) -> Complex64 {
    if detuning.abs() < RESONANCE_THRESHOLD {
        let theta = detuning * t;
        t * Complex64::new(1.0 - theta * theta / 6.0, theta / 2.0)
    } else {
        let theta = detuning * t;
        // (e^{iθ} - 1)/(iθ) = (sin θ)/θ + i (1 - cos θ)/θ, with 1 - cos θ = 2 sin²(θ/2)
        let half = (0.5 * theta).sin();
        Complex64::new(theta.sin(), 2.0 * half * half) / detuning
    }
}

/// System-A state at time `t` from spectral photon data, exciton at rest.
fn system_a_state(
    phi0_hat: &Field,
    params: &ModelParams,
    t: f64,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let grid = phi0_hat.grid();
    let exciton_phase = Complex64::cis(-params.omega0 * t);
    let coupling = Complex64::new(0.0, -params.gamma);
    grid.k_squared()
        .iter()
        .zip(phi0_hat.values())
        .map(|(&k2, &u0)| {
            let phi = Complex64::cis(-k2 * t) * u0;
            let psi = coupling * exciton_phase * duhamel_kernel(params.omega0 - k2, t) * u0;
            (phi, psi)
        })
        .unzip()
}

fn system_a_at(phi0_hat: &Field, params: &ModelParams, t: f64) -> EPState {
    let (phi, psi) = system_a_state(phi0_hat, params, t);
    let grid = phi0_hat.grid().clone();
    EPState {
        phi: Field::from_parts_unchecked(grid.clone(), phi, Representation::Spectral).to_physical(),
        psi: Field::from_parts_unchecked(grid, psi, Representation::Spectral).to_physical(),
        time: t,
    }
}

/// Exact system-A trajectory from photon data `phi0` and an exciton at rest.
pub fn evolve_system_a(
    phi0: &Field,
    params: &ModelParams,
    times: &[f64],
    recording: Recording,
) -> Result<Trajectory> {
    params.validate()?;
    check_times(times, 0.0)?;
    let phi0_hat = phi0.to_spectral();
    let weights = SobolevWeights::new(phi0.grid(), params.s);
    let mut traj = Trajectory::new(recording, params.s);
    for &t in times {
        traj.push_state(&system_a_at(&phi0_hat, params, t), &weights)?;
    }
    Ok(traj)
}

/// System A on `[0, t₁]` handed off to system B afterwards, `t₁ = C₁ ε^{1/2}`.
///
/// `phi0` is the actual initial photon field (already scaled by the amplitude).
#[derive(Debug, Clone)]
pub struct CompositeTilde {
    params: ModelParams,
    phi0_hat: Field,
    switch_time: f64,
    handoff: EPState,
}

impl CompositeTilde {
    pub fn new(phi0: &Field, params: &ModelParams, c1: f64, epsilon: f64) -> Result<Self> {
        params.validate()?;
        if !(c1.is_finite() && c1 >= 0.0) {
            return Err(Error::param("C1", format!("must be >= 0, got {c1}")));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::param(
                "epsilon",
                format!("must be > 0, got {epsilon}"),
            ));
        }
        let switch_time = c1 * epsilon.sqrt();
        let phi0_hat = phi0.to_spectral();
        let handoff = if switch_time == 0.0 {
            EPState::photon_only(phi0.to_physical())
        } else {
            system_a_at(&phi0_hat, params, switch_time)
        };
        Ok(CompositeTilde {
            params: *params,
            phi0_hat,
            switch_time,
            handoff,
        })
    }

    pub fn switch_time(&self) -> f64 {
        self.switch_time
    }

    /// State at the end of the A phase.
    pub fn handoff_state(&self) -> &EPState {
        &self.handoff
    }

    /// System-A branch at `t <= t₁`.
    pub fn a_phase_state(&self, t: f64) -> EPState {
        if t == self.switch_time {
            return self.handoff.clone();
        }
        system_a_at(&self.phi0_hat, &self.params, t)
    }

    /// System-B branch at `t >= t₁`, seeded by the handoff state.
    pub fn b_phase_state(&self, t: f64) -> Result<EPState> {
        propagate_linear_b(&self.handoff, &self.params, t - self.switch_time)
    }

    pub fn state_at(&self, t: f64) -> Result<EPState> {
        if t <= self.switch_time {
            Ok(self.a_phase_state(t))
        } else {
            self.b_phase_state(t)
        }
    }

    /// Spectral photon field at `t`, used for streaming error evaluation.
    pub(crate) fn phi_hat_at(&self, t: f64) -> Vec<Complex64> {
        if t <= self.switch_time {
            system_a_state(&self.phi0_hat, &self.params, t).0
        } else {
            let mut phi = self.handoff.phi.to_spectral().into_values();
            let mut psi = self.handoff.psi.to_spectral().into_values();
            ModeMixer::new(self.phi0_hat.grid(), &self.params, t - self.switch_time)
                .apply(&mut phi, &mut psi);
            phi
        }
    }
}

pub fn evolve_composite_tilde(
    phi0: &Field,
    params: &ModelParams,
    c1: f64,
    epsilon: f64,
    horizon: f64,
    times: &[f64],
    recording: Recording,
) -> Result<Trajectory> {
    let composite = CompositeTilde::new(phi0, params, c1, epsilon)?;
    if composite.switch_time() > horizon {
        return Err(Error::param(
            "C1",
            format!(
                "switch time {} exceeds the horizon {horizon}",
                composite.switch_time()
            ),
        ));
    }
    check_times(times, 0.0)?;
    let weights = SobolevWeights::new(phi0.grid(), params.s);
    let mut traj = Trajectory::new(recording, params.s);
    for &t in times {
        traj.push_state(&composite.state_at(t)?, &weights)?;
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{free_propagate, gaussian_initial, make_grid, sobolev_norm};

    fn params(gamma: f64) -> ModelParams {
        ModelParams {
            gamma,
            ..Default::default()
        }
    }

    #[test]
    fn propagator_is_unitary() {
        for &(k2, gamma, w0, t) in &[
            (0.0, 1.0, 1.0, 0.3),
            (12.5, 0.7, -2.0, 3.1),
            (1.0, 0.0, 1.0, 2.0),
        ] {
            let [a, b, c] = mode_propagator(k2, gamma, w0, t);
            assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-14);
            assert!((b.norm_sqr() + c.norm_sqr() - 1.0).abs() < 1e-14);
            assert!((a * b.conj() + b * c.conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn resonant_mode_mixes_equally() {
        // |k|² = ω₀: eigenvalues ω₀ ± γ with eigenvectors (1, ±1)/√2.
        let (w0, gamma, t) = (1.3, 0.4, 0.9);
        let [a, b, c] = mode_propagator(w0, gamma, w0, t);
        let plus = Complex64::cis(-(w0 + gamma) * t);
        let minus = Complex64::cis(-(w0 - gamma) * t);
        assert!((a - 0.5 * (plus + minus)).norm() < 1e-12);
        assert!((c - 0.5 * (plus + minus)).norm() < 1e-12);
        assert!((b - 0.5 * (plus - minus)).norm() < 1e-12);
    }

    #[test]
    fn decoupled_b_is_free_plus_phase() {
        let grid = make_grid(1, 64, 8.0).unwrap();
        let phi = gaussian_initial(&grid, 1.0).unwrap();
        let psi = gaussian_initial(&grid, 0.5).unwrap();
        let state = EPState::new(phi.clone(), psi.clone(), 0.0).unwrap();
        let p = params(0.0);
        let t = 0.8;
        let out = propagate_linear_b(&state, &p, t).unwrap();
        let free = free_propagate(&phi, t).unwrap();
        let rotated = psi.scaled(1.0);
        let phase = Complex64::cis(-p.omega0 * t);
        for (x, y) in out.phi.values().iter().zip(free.values()) {
            assert!((x - y).norm() < 1e-13);
        }
        for (x, y) in out.psi.values().iter().zip(rotated.values()) {
            assert!((x - phase * y).norm() < 1e-13);
        }
    }

    #[test]
    fn system_a_basics() {
        let grid = make_grid(1, 64, 8.0).unwrap();
        let phi0 = gaussian_initial(&grid, 1.0).unwrap();
        let p = ModelParams::default();
        let traj = evolve_system_a(&phi0, &p, &[0.0, 0.1], Recording::FullState).unwrap();
        let first = &traj.samples()[0];
        assert_eq!(first.norm_psi, 0.0);
        for (x, y) in first
            .phi
            .as_ref()
            .unwrap()
            .values()
            .iter()
            .zip(phi0.values())
        {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn resonant_kernel_is_linear_growth() {
        let t = 0.75;
        let k = duhamel_kernel(0.0, t);
        assert_eq!(k, Complex64::new(t, 0.0));
        // Closed form just above the threshold matches the series there.
        for &d in &[1.01 * RESONANCE_THRESHOLD, 1e-6, -3e-5] {
            let theta = d * t;
            let series = t * Complex64::new(1.0 - theta * theta / 6.0, theta / 2.0);
            assert!((duhamel_kernel(d, t) - series).norm() < 1e-15);
        }
    }

    #[test]
    fn composite_degenerates_and_is_continuous() {
        let grid = make_grid(1, 64, 8.0).unwrap();
        let phi0 = gaussian_initial(&grid, 0.3).unwrap();
        let p = ModelParams::default();
        let times = [0.0, 0.2, 0.5];
        let b = evolve_linear_b(
            &EPState::photon_only(phi0.clone()),
            &p,
            &times,
            Recording::FullState,
        )
        .unwrap();
        let comp = evolve_composite_tilde(&phi0, &p, 0.0, 0.01, 1.0, &times, Recording::FullState)
            .unwrap();
        for (x, y) in b.samples().iter().zip(comp.samples()) {
            assert_eq!(x.phi, y.phi);
            assert_eq!(x.psi, y.psi);
        }

        let c = CompositeTilde::new(&phi0, &p, 2.0, 0.04).unwrap();
        let t1 = c.switch_time();
        assert!((t1 - 0.4).abs() < 1e-15);
        assert_eq!(c.a_phase_state(t1), c.b_phase_state(t1).unwrap());
        assert!(
            evolve_composite_tilde(&phi0, &p, 20.0, 0.04, 1.0, &times, Recording::NormsOnly)
                .is_err()
        );
    }

    #[test]
    fn composite_without_coupling_is_free() {
        let grid = make_grid(1, 64, 8.0).unwrap();
        let phi0 = gaussian_initial(&grid, 1.0).unwrap();
        let p = params(0.0);
        let c = CompositeTilde::new(&phi0, &p, 1.0, 0.09).unwrap();
        let s = p.s;
        for &t in &[0.1, 0.3, 0.9] {
            let state = c.state_at(t).unwrap();
            let free = free_propagate(&phi0, t).unwrap();
            let diff = sobolev_norm(&state.phi.difference(&free).unwrap(), s);
            assert!(diff < 1e-13);
            assert!(sobolev_norm(&state.psi, s) < 1e-13);
        }
    }
}
