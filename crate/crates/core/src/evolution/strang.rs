//! Strang split-step integrators for the nonlinear EP system and for NLS.
//!
//! Each step is `N(dt/2) L(dt) N(dt/2)` where `N` is the exact pointwise phase
//! rotation `u ← exp(-i g |u|^{p-1} τ) u` and `L` is the exact linear flow in
//! Fourier space. Both substeps are unitary, so mass is conserved to roundoff.

use std::sync::Arc;

use num_complex::Complex64;

use super::linear::ModeMixer;
use super::params::{ModelParams, StepSpec};
use super::state::{EPState, Recording, Trajectory};
use crate::error::{Error, Result};
use crate::spectral::{
    check_finite, forward_in_place, inverse_in_place, Field, Grid, Representation, SobolevWeights,
};

/// `|u|^e` for `e > 0`, with `0^e = 0`.
#[inline]
fn magnitude_power(magnitude: f64, exponent: f64) -> f64 {
    if magnitude == 0.0 {
        0.0
    } else if exponent == 2.0 {
        magnitude * magnitude
    } else {
        (exponent * magnitude.ln()).exp()
    }
}

pub(crate) fn rotate_in_place(values: &mut [Complex64], g: f64, p: f64, tau: f64) {
    if g == 0.0 {
        return;
    }
    let exponent = p - 1.0;
    for v in values.iter_mut() {
        let angle = -g * magnitude_power(v.norm(), exponent) * tau;
        *v *= Complex64::cis(angle);
    }
}

/// Exact solution of `i u_t = g |u|^{p-1} u` over time `tau`, applied pointwise.
pub fn nonlinear_rotation(field: &Field, g: f64, p: f64, tau: f64) -> Result<Field> {
    if field.representation() != Representation::Physical {
        return Err(Error::RepresentationMismatch {
            expected: Representation::Physical,
            found: field.representation(),
        });
    }
    let mut out = field.clone();
    rotate_in_place(out.values_mut(), g, p, tau);
    Ok(out)
}

/// Stateful EP integrator. The photon is kept in spectral space and the
/// exciton in physical space between steps. `dt` may be negative.
pub struct EpStepper {
    grid: Arc<Grid>,
    params: ModelParams,
    dt: f64,
    mixer: ModeMixer,
    phi_hat: Vec<Complex64>,
    psi: Vec<Complex64>,
    start_time: f64,
    steps: usize,
}

impl EpStepper {
    pub fn new(initial: &EPState, params: &ModelParams, dt: f64) -> Result<Self> {
        params.validate()?;
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::param(
                "dt",
                format!("must be finite and nonzero, got {dt}"),
            ));
        }
        let grid = initial.grid().clone();
        let phi_hat = initial.phi.to_spectral().into_values();
        let psi = initial.psi.to_physical().into_values();
        check_finite("initial photon field", &phi_hat)?;
        check_finite("initial exciton field", &psi)?;
        Ok(EpStepper {
            mixer: ModeMixer::new(&grid, params, dt),
            grid,
            params: *params,
            dt,
            phi_hat,
            psi,
            start_time: initial.time,
            steps: 0,
        })
    }

    pub fn time(&self) -> f64 {
        self.start_time + self.steps as f64 * self.dt
    }

    pub fn steps_taken(&self) -> usize {
        self.steps
    }

    pub fn step(&mut self) -> Result<()> {
        let half = 0.5 * self.dt;
        let ModelParams { g, p, .. } = self.params;
        rotate_in_place(&mut self.psi, g, p, half);
        forward_in_place(&self.grid, &mut self.psi);
        self.mixer.apply(&mut self.phi_hat, &mut self.psi);
        inverse_in_place(&self.grid, &mut self.psi);
        rotate_in_place(&mut self.psi, g, p, half);
        self.steps += 1;
        if check_finite("exciton", &self.psi).is_err()
            || check_finite("photon", &self.phi_hat).is_err()
        {
            return Err(Error::SolverBlowup {
                time: self.time(),
                step: self.steps,
            });
        }
        Ok(())
    }

    pub fn advance(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    /// Current state; the photon field is returned in spectral form.
    pub fn state(&self) -> EPState {
        EPState {
            phi: Field::from_parts_unchecked(
                self.grid.clone(),
                self.phi_hat.clone(),
                Representation::Spectral,
            ),
            psi: Field::from_parts_unchecked(
                self.grid.clone(),
                self.psi.clone(),
                Representation::Physical,
            ),
            time: self.time().max(0.0),
        }
    }

    pub(crate) fn phi_hat(&self) -> &[Complex64] {
        &self.phi_hat
    }
}

/// Stateful NLS integrator on a single physical-space field. `dt` may be negative.
pub struct NlsStepper {
    grid: Arc<Grid>,
    params: ModelParams,
    dt: f64,
    free_phase: Vec<Complex64>,
    phi: Vec<Complex64>,
    start_time: f64,
    steps: usize,
}

impl NlsStepper {
    pub fn new(phi0: &Field, start_time: f64, params: &ModelParams, dt: f64) -> Result<Self> {
        params.validate()?;
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::param(
                "dt",
                format!("must be finite and nonzero, got {dt}"),
            ));
        }
        let grid = phi0.grid().clone();
        let phi = phi0.to_physical().into_values();
        check_finite("initial field", &phi)?;
        let free_phase = grid
            .k_squared()
            .iter()
            .map(|&k2| Complex64::cis(-k2 * dt))
            .collect();
        Ok(NlsStepper {
            grid,
            params: *params,
            dt,
            free_phase,
            phi,
            start_time,
            steps: 0,
        })
    }

    pub fn time(&self) -> f64 {
        self.start_time + self.steps as f64 * self.dt
    }

    pub fn step(&mut self) -> Result<()> {
        let half = 0.5 * self.dt;
        let ModelParams { g, p, .. } = self.params;
        rotate_in_place(&mut self.phi, g, p, half);
        forward_in_place(&self.grid, &mut self.phi);
        for (v, w) in self.phi.iter_mut().zip(&self.free_phase) {
            *v *= w;
        }
        inverse_in_place(&self.grid, &mut self.phi);
        rotate_in_place(&mut self.phi, g, p, half);
        self.steps += 1;
        if check_finite("field", &self.phi).is_err() {
            return Err(Error::SolverBlowup {
                time: self.time(),
                step: self.steps,
            });
        }
        Ok(())
    }

    pub fn advance(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        Field::from_parts_unchecked(
            self.grid.clone(),
            self.phi.clone(),
            Representation::Physical,
        )
    }
}

/// Step indices at which samples are taken: every `stride` steps, plus the last.
fn sample_schedule(total_steps: usize, stride: usize) -> impl Iterator<Item = usize> {
    let regular = (0..=total_steps).step_by(stride);
    let tail = (total_steps % stride != 0).then_some(total_steps);
    regular.chain(tail)
}

/// Runs the EP integrator to `horizon`, calling `observe` at every sample.
pub fn evolve_ep_observed(
    initial: &EPState,
    params: &ModelParams,
    step: &StepSpec,
    horizon: f64,
    mut observe: impl FnMut(&EpStepper) -> Result<()>,
) -> Result<()> {
    let stride = step.steps_per_sample()?;
    let total = step.steps_to(horizon)?;
    let mut stepper = EpStepper::new(initial, params, step.dt)?;
    for target in sample_schedule(total, stride) {
        stepper.advance(target - stepper.steps_taken())?;
        observe(&stepper)?;
    }
    Ok(())
}

/// Nonlinear EP trajectory over `[0, horizon]`.
pub fn evolve_ep(
    initial: &EPState,
    params: &ModelParams,
    step: &StepSpec,
    horizon: f64,
    recording: Recording,
) -> Result<Trajectory> {
    let weights = SobolevWeights::new(initial.grid(), params.s);
    let mut traj = Trajectory::new(recording, params.s);
    evolve_ep_observed(initial, params, step, horizon, |stepper| {
        traj.push_state(&stepper.state(), &weights)
    })?;
    Ok(traj)
}

pub fn evolve_nls_observed(
    phi0: &Field,
    params: &ModelParams,
    step: &StepSpec,
    horizon: f64,
    mut observe: impl FnMut(f64, &NlsStepper) -> Result<()>,
) -> Result<()> {
    let stride = step.steps_per_sample()?;
    let total = step.steps_to(horizon)?;
    let mut stepper = NlsStepper::new(phi0, 0.0, params, step.dt)?;
    let mut taken = 0;
    for target in sample_schedule(total, stride) {
        stepper.advance(target - taken)?;
        taken = target;
        observe(stepper.time(), &stepper)?;
    }
    Ok(())
}

/// NLS trajectory over `[0, horizon]`; `norm_psi` is zero throughout.
pub fn evolve_nls(
    phi0: &Field,
    params: &ModelParams,
    step: &StepSpec,
    horizon: f64,
    recording: Recording,
) -> Result<Trajectory> {
    let weights = SobolevWeights::new(phi0.grid(), params.s);
    let mut traj = Trajectory::new(recording, params.s);
    evolve_nls_observed(phi0, params, step, horizon, |t, stepper| {
        traj.push_fields(t, &stepper.field(), None, &weights)
    })?;
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{evolve_linear_b, total_mass};
    use crate::spectral::{free_propagate, gaussian_initial, make_grid, sobolev_norm};

    #[test]
    fn rotation_preserves_modulus() {
        let grid = make_grid(1, 64, 5.0).unwrap();
        let f = Field::from_fn(grid, |x| Complex64::new(x[0].sin() * 3.0, x[0].cos())).unwrap();
        for &p in &[3.0, 2.5, 1.2, 7.0] {
            let r = nonlinear_rotation(&f, 1.7, p, 0.37).unwrap();
            let worst = r
                .values()
                .iter()
                .zip(f.values())
                .map(|(a, b)| (a.norm() - b.norm()).abs())
                .fold(0.0, f64::max);
            assert!(worst <= 1e-14, "p = {p}: {worst}");
        }
    }

    #[test]
    fn magnitude_power_matches_powf() {
        assert_eq!(magnitude_power(0.0, 0.5), 0.0);
        for &(m, e) in &[(0.3, 2.0), (1.7, 0.5), (2.0, 4.0), (1e-5, 1.3)] {
            let got = magnitude_power(m, e);
            assert!((got - f64::powf(m, e)).abs() <= 1e-14 * got);
        }
    }

    #[test]
    fn sampling_schedule() {
        assert_eq!(sample_schedule(10, 5).collect::<Vec<_>>(), vec![0, 5, 10]);
        assert_eq!(
            sample_schedule(11, 5).collect::<Vec<_>>(),
            vec![0, 5, 10, 11]
        );
    }

    #[test]
    fn ep_without_nonlinearity_is_system_b() {
        let grid = make_grid(1, 128, 10.0).unwrap();
        let params = ModelParams {
            g: 0.0,
            ..Default::default()
        };
        let initial = EPState::photon_only(gaussian_initial(&grid, 1.0).unwrap());
        let step = StepSpec::new(1e-3, 10).unwrap();
        let ep = evolve_ep(&initial, &params, &step, 1.0, Recording::FullState).unwrap();
        let b = evolve_linear_b(&initial, &params, &ep.times(), Recording::FullState).unwrap();
        for (x, y) in ep.samples().iter().zip(b.samples()) {
            let dphi = x
                .phi
                .as_ref()
                .unwrap()
                .difference(y.phi.as_ref().unwrap())
                .unwrap();
            let dpsi = x
                .psi
                .as_ref()
                .unwrap()
                .difference(y.psi.as_ref().unwrap())
                .unwrap();
            assert!(sobolev_norm(&dphi, params.s) < 1e-10);
            assert!(sobolev_norm(&dpsi, params.s) < 1e-10);
        }
    }

    #[test]
    fn decoupled_ep_keeps_exciton_at_rest() {
        let grid = make_grid(1, 128, 10.0).unwrap();
        let params = ModelParams {
            gamma: 0.0,
            ..Default::default()
        };
        let phi0 = gaussian_initial(&grid, 1.0).unwrap();
        let step = StepSpec::new(1e-3, 10).unwrap();
        let traj = evolve_ep(
            &EPState::photon_only(phi0.clone()),
            &params,
            &step,
            0.5,
            Recording::FullState,
        )
        .unwrap();
        for s in traj.samples() {
            assert_eq!(s.norm_psi, 0.0);
            let free = free_propagate(&phi0, s.time).unwrap();
            let d = s.phi.as_ref().unwrap().difference(&free).unwrap();
            assert!(sobolev_norm(&d, params.s) < 1e-12);
        }
    }

    #[test]
    fn nls_without_nonlinearity_is_free() {
        let grid = make_grid(1, 128, 10.0).unwrap();
        let params = ModelParams {
            g: 0.0,
            ..Default::default()
        };
        let phi0 = gaussian_initial(&grid, 1.0).unwrap();
        let traj = evolve_nls(
            &phi0,
            &params,
            &StepSpec::default(),
            0.5,
            Recording::FullState,
        )
        .unwrap();
        for s in traj.samples() {
            let free = free_propagate(&phi0, s.time).unwrap();
            let d = s.phi.as_ref().unwrap().difference(&free).unwrap();
            assert!(sobolev_norm(&d, params.s) < 1e-12);
        }
    }

    #[test]
    fn blowup_is_reported() {
        let grid = make_grid(1, 16, 2.0).unwrap();
        let params = ModelParams::default();
        let mut phi0 = gaussian_initial(&grid, 1.0).unwrap();
        phi0.values_mut()[3] = Complex64::new(1e308, 0.0);
        // Huge amplitude overflows the nonlinear phase and then the transform.
        let mut stepper = NlsStepper::new(&phi0, 0.0, &params, 1e-3).unwrap();
        let err = stepper.advance(5).unwrap_err();
        assert!(matches!(err, Error::SolverBlowup { step: 1, .. }), "{err}");
    }

    #[test]
    fn mass_is_conserved_by_ep_steps() {
        let grid = make_grid(1, 64, 10.0).unwrap();
        let params = ModelParams::default();
        let initial = EPState::photon_only(gaussian_initial(&grid, 1.5).unwrap());
        let m0 = total_mass(&initial);
        let mut stepper = EpStepper::new(&initial, &params, 1e-2).unwrap();
        stepper.advance(100).unwrap();
        let m1 = total_mass(&stepper.state());
        assert!(((m1 - m0) / m0).abs() < 1e-12);
    }
}
