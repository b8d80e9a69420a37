//! Perturbed standing waves and the tracked orbital distance.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{evolve, standing_wave_state, Diagnostics, EvolveConfig};
use crate::error::{Error, Result};
use crate::model::PeriodicProfile;

/// Even, zero-mean perturbation of `u` with unit `H^1 x L^2` norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerturbationShape {
    /// `cos(2 pi j x / L)`, normalised.
    Cosine(u32),
}

impl Default for PerturbationShape {
    fn default() -> Self {
        Self::Cosine(2)
    }
}

impl PerturbationShape {
    pub fn samples(&self, profile: &PeriodicProfile) -> Result<Vec<f64>> {
        let Self::Cosine(j) = *self;
        let n = profile.grid.n;
        if j == 0 || 2 * j as usize >= n {
            return Err(Error::InvalidParams(format!("cosine mode {j} not resolved on {n} points")));
        }
        let length = profile.grid.length;
        let k = 2.0 * PI * j as f64 / length;
        let scale = 1.0 / ((1.0 + k * k) * length / 2.0).sqrt();
        Ok(profile.grid.nodes().map(|x| scale * (k * x).cos()).collect())
    }
}

/// Settings of [`perturbation_experiment`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationConfig {
    pub epsilon: f64,
    pub shape: PerturbationShape,
    pub dt: f64,
    pub t_end: f64,
    pub cadence: f64,
    /// Stop once `rho / epsilon` exceeds this ratio.
    pub stop_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReport {
    pub epsilon: f64,
    pub series: Vec<Diagnostics>,
    /// `max_t rho(t) / epsilon` (`max_t rho(t)` when `epsilon = 0`).
    pub max_ratio: f64,
    /// Time of the early stop, if `stop_ratio` was crossed.
    pub stopped_at: Option<f64>,
}

/// Evolve `(phi + epsilon w, i c phi)` and track the orbital distance.
pub fn perturbation_experiment(profile: &PeriodicProfile, config: &PerturbationConfig) -> Result<PerturbationReport> {
    let epsilon = config.epsilon;
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidParams(format!("epsilon = {epsilon} must be non-negative")));
    }
    let w = config.shape.samples(profile)?;
    let mut state = standing_wave_state(profile)?;
    for (u, dw) in state.u.iter_mut().zip(&w) {
        *u += Complex64::new(epsilon * dw, 0.0);
    }
    let evolve_config = EvolveConfig {
        p: profile.params.p,
        dt: config.dt,
        t_end: config.t_end,
        cadence: config.cadence,
        reference: Some(profile),
        stop_distance: config.stop_ratio.map(|r| r * epsilon),
    };
    let (end, series) = evolve(&state, &evolve_config)?;
    let max_rho = series.iter().filter_map(|d| d.orbital_distance).fold(0.0, f64::max);
    let finished = (end.time - config.t_end).abs() <= 1e-9 * config.t_end.max(1.0);
    Ok(PerturbationReport {
        epsilon,
        max_ratio: if epsilon > 0.0 { max_rho / epsilon } else { max_rho },
        stopped_at: (!finished).then_some(end.time),
        series,
    })
}
