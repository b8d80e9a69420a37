//! Pseudo-spectral time evolution of `u_tt - u_xx + u - log(|u|^p) u = 0`
//! on a periodic grid, with the conserved quantities as diagnostics.

mod dalembert;
mod experiment;
mod orbit;

pub use dalembert::{dalembert_oracle, ForcedLinearStepper};
pub use experiment::{perturbation_experiment, PerturbationConfig, PerturbationReport, PerturbationShape};
pub use orbit::{lyapunov_gap, orbital_distance, standing_wave_state, OrbitFit};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Grid, PeriodicProfile};
use crate::numerics::fourier::Spectral;

/// Below this modulus `u log|u|^p` is taken as 0 (underflow guard only).
pub const LOG_FLOOR: f64 = 1e-300;

/// Field `u` and velocity `v = u_t` sampled on a periodic grid at time `time`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub grid: Grid,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub time: f64,
}

impl FieldState {
    pub fn new(grid: Grid, u: Vec<Complex64>, v: Vec<Complex64>, time: f64) -> Result<Self> {
        if u.len() != grid.n || v.len() != grid.n {
            return Err(Error::InvalidParams("field arrays must match the grid".into()));
        }
        let state = Self { grid, u, v, time };
        state.check_finite()?;
        Ok(state)
    }

    pub fn zeros(grid: Grid) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); grid.n];
        Self {
            grid,
            u: zero.clone(),
            v: zero,
            time: 0.0,
        }
    }

    pub fn check_finite(&self) -> Result<()> {
        let ok = self.u.iter().chain(&self.v).all(|z| z.re.is_finite() && z.im.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::NonFinite(self.time))
        }
    }
}

/// One sample of the diagnostic time series. The orbit-related fields are
/// present only when a reference profile is supplied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub time: f64,
    pub energy: f64,
    pub momentum: f64,
    pub lyapunov_gap: Option<f64>,
    pub orbital_distance: Option<f64>,
    pub shift: Option<f64>,
    pub phase: Option<f64>,
}

fn trapezoid(values: impl Iterator<Item = f64>, grid: &Grid) -> f64 {
    values.sum::<f64>() * grid.spacing()
}

/// `|u|^2 (1 + p/2 - log|u|^p)` with the zero convention at `u = 0`.
fn potential_density(z: Complex64, p: f64) -> f64 {
    let r2 = z.norm_sqr();
    if r2 == 0.0 {
        return 0.0;
    }
    r2 * (1.0 + 0.5 * p - 0.5 * p * r2.ln())
}

/// `E = 1/2 int |u_x|^2 + |v|^2 + (1 + p/2 - log|u|^p) |u|^2`.
pub fn energy(state: &FieldState, p: u32) -> f64 {
    energy_with(&Spectral::new(state.grid.n, state.grid.length), state, p)
}

fn energy_with(spectral: &Spectral, state: &FieldState, p: u32) -> f64 {
    let grad = spectral.gradient_norm_sq(&state.u);
    let rest = trapezoid(
        state.u.iter().zip(&state.v).map(|(u, v)| v.norm_sqr() + potential_density(*u, p as f64)),
        &state.grid,
    );
    0.5 * (grad + rest)
}

/// `F = Im int conj(u) v`.
pub fn momentum(state: &FieldState) -> f64 {
    trapezoid(state.u.iter().zip(&state.v).map(|(u, v)| (u.conj() * v).im), &state.grid)
}

/// Options of the Strang stepper. `mass = 1` and `nonlinear = true` give the
/// physical equation; the other settings are test hooks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperOptions {
    pub p: u32,
    pub mass: f64,
    pub nonlinear: bool,
}

impl StepperOptions {
    pub fn physical(p: u32) -> Self {
        Self {
            p,
            mass: 1.0,
            nonlinear: true,
        }
    }
}

/// Kick-flight-kick splitting with a fixed step `dt` (negative allowed).
#[derive(Debug, Clone)]
pub struct Stepper {
    spectral: Spectral,
    options: StepperOptions,
    dt: f64,
    cos: Vec<f64>,
    sin_over_omega: Vec<f64>,
    omega_sin: Vec<f64>,
    u_hat: Vec<Complex64>,
    v_hat: Vec<Complex64>,
}

impl Stepper {
    pub fn new(grid: Grid, dt: f64, options: StepperOptions) -> Result<Self> {
        if !dt.is_finite() || dt == 0.0 {
            return Err(Error::InvalidParams(format!("dt = {dt} must be finite and nonzero")));
        }
        let spectral = Spectral::new(grid.n, grid.length);
        let mut cos = Vec::with_capacity(grid.n);
        let mut sin_over_omega = Vec::with_capacity(grid.n);
        let mut omega_sin = Vec::with_capacity(grid.n);
        for &k in spectral.wavenumbers() {
            let omega = (k * k + options.mass).sqrt();
            let (s, c) = (omega * dt).sin_cos();
            cos.push(c);
            sin_over_omega.push(if omega == 0.0 { dt } else { s / omega });
            omega_sin.push(omega * s);
        }
        Ok(Self {
            spectral,
            options,
            dt,
            cos,
            sin_over_omega,
            omega_sin,
            u_hat: vec![Complex64::new(0.0, 0.0); grid.n],
            v_hat: vec![Complex64::new(0.0, 0.0); grid.n],
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    fn kick(&self, state: &mut FieldState, tau: f64) {
        if !self.options.nonlinear {
            return;
        }
        let p = self.options.p as f64;
        for (u, v) in state.u.iter().zip(state.v.iter_mut()) {
            let r = u.norm();
            if r >= LOG_FLOOR {
                *v += u * (tau * p * r.ln());
            }
        }
    }

    fn flight(&mut self, state: &mut FieldState) {
        self.u_hat.copy_from_slice(&state.u);
        self.v_hat.copy_from_slice(&state.v);
        self.spectral.forward(&mut self.u_hat);
        self.spectral.forward(&mut self.v_hat);
        for m in 0..self.u_hat.len() {
            let (u, v) = (self.u_hat[m], self.v_hat[m]);
            self.u_hat[m] = u * self.cos[m] + v * self.sin_over_omega[m];
            self.v_hat[m] = v * self.cos[m] - u * self.omega_sin[m];
        }
        self.spectral.inverse(&mut self.u_hat);
        self.spectral.inverse(&mut self.v_hat);
        state.u.copy_from_slice(&self.u_hat);
        state.v.copy_from_slice(&self.v_hat);
    }

    /// Advance `state` in place by one step.
    pub fn step(&mut self, state: &mut FieldState) -> Result<()> {
        if state.grid != Grid::new(self.spectral.n(), self.spectral.length())? {
            return Err(Error::InvalidParams("state grid differs from the stepper grid".into()));
        }
        self.kick(state, 0.5 * self.dt);
        self.flight(state);
        self.kick(state, 0.5 * self.dt);
        state.time += self.dt;
        state.check_finite()
    }
}

/// One Strang step of the physical equation.
pub fn step(state: &FieldState, p: u32, dt: f64) -> Result<FieldState> {
    let mut stepper = Stepper::new(state.grid, dt, StepperOptions::physical(p))?;
    let mut next = state.clone();
    stepper.step(&mut next)?;
    Ok(next)
}

/// Sampling and reference settings of [`evolve`].
#[derive(Debug, Clone)]
pub struct EvolveConfig<'a> {
    pub p: u32,
    pub dt: f64,
    pub t_end: f64,
    /// Time between diagnostic samples (rounded to a whole number of steps).
    pub cadence: f64,
    /// Standing wave against which the gap and orbital distance are measured.
    pub reference: Option<&'a PeriodicProfile>,
    /// Stop at the first sample whose orbital distance exceeds this value.
    pub stop_distance: Option<f64>,
}

/// Step from `state.time` to `state.time + t_end`. The step is shortened
/// slightly so that a whole number of steps lands on `t_end`. Diagnostics are
/// taken at the start, every `cadence`, and at the end (or at the early stop
/// requested by `stop_distance`).
pub fn evolve(state: &FieldState, config: &EvolveConfig) -> Result<(FieldState, Vec<Diagnostics>)> {
    if !(config.dt > 0.0) || !(config.t_end >= 0.0) || !(config.cadence > 0.0) {
        return Err(Error::InvalidParams("dt and cadence must be positive, t_end non-negative".into()));
    }
    let steps = (config.t_end / config.dt - 1e-9).ceil().max(0.0) as usize;
    let mut current = state.clone();
    let mut series = Vec::new();
    if config.stop_distance.is_some() && config.reference.is_none() {
        return Err(Error::InvalidParams("stop_distance needs a reference profile".into()));
    }
    let observer = Observer::new(current.grid, config.p, config.reference)?;
    series.push(observer.observe(&current)?);
    if steps == 0 {
        return Ok((current, series));
    }
    let dt = config.t_end / steps as f64;
    let every = ((config.cadence / dt).round() as usize).max(1);
    let mut stepper = Stepper::new(current.grid, dt, StepperOptions::physical(config.p))?;
    let t0 = current.time;
    for i in 1..=steps {
        stepper.step(&mut current)?;
        current.time = t0 + i as f64 * dt;
        if i % every == 0 || i == steps {
            let d = observer.observe(&current)?;
            series.push(d);
            if let (Some(limit), Some(rho)) = (config.stop_distance, d.orbital_distance) {
                if rho > limit {
                    break;
                }
            }
        }
    }
    Ok((current, series))
}

/// Largest `|q(t) - q(0)| / |q(0)|` over a series.
pub fn relative_drift(series: &[Diagnostics], quantity: impl Fn(&Diagnostics) -> f64) -> f64 {
    let Some(first) = series.first() else {
        return 0.0;
    };
    let q0 = quantity(first);
    let scale = if q0 == 0.0 { 1.0 } else { q0.abs() };
    series.iter().map(|d| (quantity(d) - q0).abs() / scale).fold(0.0, f64::max)
}

struct Observer<'a> {
    spectral: Spectral,
    p: u32,
    reference: Option<(&'a PeriodicProfile, f64)>,
}

impl<'a> Observer<'a> {
    fn new(grid: Grid, p: u32, reference: Option<&'a PeriodicProfile>) -> Result<Self> {
        let spectral = Spectral::new(grid.n, grid.length);
        let reference = match reference {
            Some(profile) => {
                let base = standing_wave_state(profile)?;
                if base.grid != grid {
                    return Err(Error::InvalidParams("reference profile grid differs from the state grid".into()));
                }
                let c = profile.params.c;
                Some((profile, energy_with(&spectral, &base, p) - c * momentum(&base)))
            }
            None => None,
        };
        Ok(Self { spectral, p, reference })
    }

    fn observe(&self, state: &FieldState) -> Result<Diagnostics> {
        let energy = energy_with(&self.spectral, state, self.p);
        let momentum = momentum(state);
        let mut d = Diagnostics {
            time: state.time,
            energy,
            momentum,
            lyapunov_gap: None,
            orbital_distance: None,
            shift: None,
            phase: None,
        };
        if let Some((profile, g0)) = self.reference {
            let fit = orbit::orbital_distance_with(&self.spectral, state, profile)?;
            d.lyapunov_gap = Some(energy - profile.params.c * momentum - g0);
            d.orbital_distance = Some(fit.rho);
            d.shift = Some(fit.shift);
            d.phase = Some(fit.phase);
        }
        Ok(d)
    }
}
