//! Orbital distance to the standing-wave orbit `{e^{i theta} phi(. + y)}`
//! and the Lyapunov gap.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{energy_with, momentum, FieldState};
use crate::error::{Error, Result};
use crate::model::PeriodicProfile;
use crate::numerics::fourier::Spectral;

/// Minimiser of `Omega(y, theta)` and `rho = sqrt(min Omega)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitFit {
    pub rho: f64,
    /// Shift in `(-L/2, L/2]`.
    pub shift: f64,
    /// Phase in `(-pi, pi]`.
    pub phase: f64,
}

/// The standing wave `(phi, i c phi)` as a field state at time 0.
pub fn standing_wave_state(profile: &PeriodicProfile) -> Result<FieldState> {
    let c = profile.params.c;
    FieldState::new(
        profile.grid,
        profile.phi.iter().map(|&f| Complex64::new(f, 0.0)).collect(),
        profile.phi.iter().map(|&f| Complex64::new(0.0, c * f)).collect(),
        0.0,
    )
}

/// `(E - cF)(state) - (E - cF)(phi, i c phi)`.
pub fn lyapunov_gap(state: &FieldState, profile: &PeriodicProfile, p: u32) -> Result<f64> {
    check_grid(state, profile)?;
    let spectral = Spectral::new(state.grid.n, state.grid.length);
    let c = profile.params.c;
    let base = standing_wave_state(profile)?;
    let g = |s: &FieldState| energy_with(&spectral, s, p) - c * momentum(s);
    Ok(g(state) - g(&base))
}

fn check_grid(state: &FieldState, profile: &PeriodicProfile) -> Result<()> {
    if state.grid != profile.grid {
        return Err(Error::InvalidParams(format!(
            "state grid (n = {}, L = {}) differs from profile grid (n = {}, L = {})",
            state.grid.n, state.grid.length, profile.grid.n, profile.grid.length
        )));
    }
    Ok(())
}

/// `min over (y, theta)` of
/// `|d(e^{i theta} u(.+y)) - phi'|^2 + (1-c^2)|e^{i theta} u(.+y) - phi|^2 + |e^{i theta} v(.+y) - i c phi|^2`.
/// All grid shifts are scanned at once by circular correlation, the best one
/// is refined by a parabola through its neighbours, and the distance is then
/// evaluated directly at the chosen `(y, theta)`.
pub fn orbital_distance(state: &FieldState, profile: &PeriodicProfile) -> Result<OrbitFit> {
    orbital_distance_with(&Spectral::new(state.grid.n, state.grid.length), state, profile)
}

pub(super) fn orbital_distance_with(spectral: &Spectral, state: &FieldState, profile: &PeriodicProfile) -> Result<OrbitFit> {
    check_grid(state, profile)?;
    let n = state.grid.n;
    let length = state.grid.length;
    let c = profile.params.c;
    let mass = 1.0 - c * c;
    let k = spectral.wavenumbers();
    let u_hat = spectral.to_spectrum(&state.u);
    let v_hat = spectral.to_spectrum(&state.v);
    let phi: Vec<Complex64> = profile.phi.iter().map(|&f| Complex64::new(f, 0.0)).collect();
    let phi_hat = spectral.to_spectrum(&phi);
    let weight = length / (n * n) as f64;

    // S(y_m) = int [u_x(x+y) phi' + (1-c^2) u(x+y) phi - i c v(x+y) phi] dx
    let w: Vec<Complex64> = (0..n)
        .map(|m| phi_hat[m].conj() * ((k[m] * k[m] + mass) * u_hat[m] - Complex64::new(0.0, c) * v_hat[m]))
        .collect();
    let s = spectral.from_spectrum(&w);
    let scale = length / n as f64;
    let state_part: f64 = (0..n)
        .map(|m| (k[m] * k[m] + mass) * u_hat[m].norm_sqr() + v_hat[m].norm_sqr())
        .sum::<f64>()
        * weight;
    let omega_grid: Vec<f64> = s.iter().map(|z| -2.0 * scale * z.norm()).collect();
    let best = (0..n).min_by(|&a, &b| omega_grid[a].total_cmp(&omega_grid[b])).unwrap_or(0);

    let h = state.grid.spacing();
    let (left, mid, right) = (
        state_part + omega_grid[(best + n - 1) % n],
        state_part + omega_grid[best],
        state_part + omega_grid[(best + 1) % n],
    );
    let curvature = left - 2.0 * mid + right;
    let offset = if curvature > 0.0 {
        (0.5 * (left - right) / curvature).clamp(-0.5, 0.5)
    } else {
        0.0
    };

    let direct = |y: f64| -> (f64, f64) {
        let shift: Vec<Complex64> = (0..n)
            .map(|m| {
                if Some(m) == spectral.nyquist() {
                    Complex64::new((k[m] * y).cos(), 0.0)
                } else {
                    Complex64::from_polar(1.0, k[m] * y)
                }
            })
            .collect();
        let corr: Complex64 = (0..n)
            .map(|m| w[m] * shift[m])
            .sum::<Complex64>();
        let rot = if corr.norm() > 0.0 {
            corr.conj() / corr.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let ic = Complex64::new(0.0, c);
        let omega: f64 = (0..n)
            .map(|m| {
                let du = rot * shift[m] * u_hat[m] - phi_hat[m];
                let dv = rot * shift[m] * v_hat[m] - ic * phi_hat[m];
                (k[m] * k[m] + mass) * du.norm_sqr() + dv.norm_sqr()
            })
            .sum::<f64>()
            * weight;
        (omega, rot.arg())
    };

    let y_grid = best as f64 * h;
    let (omega_at_grid, theta_at_grid) = direct(y_grid);
    let (mut omega, mut theta, mut y) = (omega_at_grid, theta_at_grid, y_grid);
    if offset != 0.0 {
        let y_ref = y_grid + offset * h;
        let (o, t) = direct(y_ref);
        if o < omega {
            (omega, theta, y) = (o, t, y_ref);
        }
    }
    Ok(OrbitFit {
        rho: omega.max(0.0).sqrt(),
        shift: {
            let y = y.rem_euclid(length);
            if y > 0.5 * length { y - length } else { y }
        },
        phase: theta,
    })
}
