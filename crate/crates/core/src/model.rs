//! Domain types, the logarithmic nonlinearity and phase-plane primitives.
//!
//! Standing waves `u = e^{ict} phi(x)` of `u_tt - u_xx + u - log(|u|^p) u = 0`
//! solve `-phi'' + (1 - c^2) phi - log(phi^p) phi = 0`. The phase plane of this
//! ODE has a saddle at the origin, a center at `r2(c) = e^{(1-c^2)/p}` and a
//! homoclinic loop through the Gaussian `e^{1/2 + (1-c^2)/p} e^{-p x^2 / 4}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonlinearity power `p` and wave frequency `c`. The interaction strength
/// is fixed at one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub p: u32,
    pub c: f64,
}

impl WaveParams {
    pub fn new(p: u32, c: f64) -> Result<Self> {
        let params = Self { p, c };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::InvalidParams("p must be a positive integer".into()));
        }
        if !self.c.is_finite() {
            return Err(Error::InvalidParams(format!("c = {} is not finite", self.c)));
        }
        Ok(())
    }

    /// Interaction strength; always one.
    pub const fn mu(&self) -> f64 {
        1.0
    }

    pub fn pf(&self) -> f64 {
        self.p as f64
    }

    /// `1 - c^2`.
    pub fn mass(&self) -> f64 {
        1.0 - self.c * self.c
    }

    /// Positive root `r2(c) = e^{(1-c^2)/p}` of `h`, the phase-plane center.
    pub fn center(&self) -> f64 {
        (self.mass() / self.pf()).exp()
    }

    /// Peak of the homoclinic (Gaussian) orbit, `e^{1/2 + (1-c^2)/p}`.
    pub fn homoclinic_amplitude(&self) -> f64 {
        (0.5 + self.mass() / self.pf()).exp()
    }

    /// Small-oscillation period `2 pi / sqrt(p)` (the infimum of all periods).
    pub fn minimal_period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.pf().sqrt()
    }

    /// Right-hand side of the first-order standing-wave system
    /// `(phi, phi')' = (phi', h(phi))`.
    pub fn profile_rhs(&self) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + Copy {
        let mass = self.mass();
        let p = self.pf();
        move |_x, y| [y[1], (mass - p * y[0].ln()) * y[0]]
    }
}

/// Uniform periodic grid `x_j = j L / n`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n: usize,
    pub length: f64,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!("grid size {n} must be even and >= 4")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidParams(format!("grid length {length} must be positive")));
        }
        Ok(Self { n, length })
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.node(j))
    }

    /// Index of the node mirrored about `x = 0` (periodic wrap).
    pub fn mirror(&self, j: usize) -> usize {
        (self.n - j) % self.n
    }
}

/// Samples of a positive, even, periodic standing-wave profile with its
/// maximum at node 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicProfile {
    pub params: WaveParams,
    pub grid: Grid,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub amplitude: f64,
    pub period: f64,
}

impl PeriodicProfile {
    /// Check positivity, evenness about node 0 and the location of the maximum.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        let n = self.grid.n;
        if self.phi.len() != n || self.dphi.len() != n {
            return Err(Error::InvalidParams("profile arrays do not match the grid".into()));
        }
        if self.phi.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::Domain("profile must be strictly positive".into()));
        }
        for j in 1..n {
            let m = self.grid.mirror(j);
            if (self.phi[j] - self.phi[m]).abs() > tol * self.amplitude {
                return Err(Error::Domain(format!("profile not even at node {j}")));
            }
        }
        if self.dphi[0].abs() > tol * self.amplitude.max(1.0) {
            return Err(Error::Domain("phi'(0) must vanish".into()));
        }
        let max = self.phi.iter().copied().fold(f64::MIN, f64::max);
        if (max - self.phi[0]).abs() > tol * self.amplitude || (self.phi[0] - self.amplitude).abs() > tol * self.amplitude {
            return Err(Error::Domain("maximum must be attained at node 0".into()));
        }
        Ok(())
    }

    /// `int_0^L phi^2 dx` by the periodic trapezoid rule.
    pub fn l2_norm_sq(&self) -> f64 {
        crate::numerics::quadrature::periodic_trapezoid(
            &self.phi.iter().map(|v| v * v).collect::<Vec<_>>(),
            self.grid.length,
        )
    }

    /// `phi''(0)` from the ODE right-hand side at the turning point.
    pub fn second_derivative_at_peak(&self) -> f64 {
        potential_h_unchecked(&self.params, self.amplitude)
    }
}

/// Point `(phi, xi = phi')` of the phase plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub phi: f64,
    pub xi: f64,
}

/// `z log(|z|^p)`, extended continuously by zero at the origin.
pub fn log_nonlinearity(z: Complex64, p: u32) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    z * (p as f64 * r.ln())
}

/// Right-hand side of the log-Lipschitz estimate
/// `|a log|a| - b log|b|| <= (1 + |log|b||) |a - b|`, valid for `|a| <= |b|`.
pub fn nonlinearity_lipschitz_bound(a: Complex64, b: Complex64) -> Result<f64> {
    let nb = b.norm();
    if nb == 0.0 {
        return Err(Error::Domain("b must be nonzero".into()));
    }
    if a.norm() > nb {
        return Err(Error::Domain(format!("|a| = {} exceeds |b| = {nb}", a.norm())));
    }
    Ok((1.0 + nb.ln().abs()) * (a - b).norm())
}

/// `h(c, phi) = (1 - c^2) phi - p log(phi) phi`, i.e. `phi''` along solutions.
pub fn potential_h(params: &WaveParams, phi: f64) -> Result<f64> {
    if !(phi > 0.0) {
        return Err(Error::Domain(format!("h requires phi > 0, got {phi}")));
    }
    Ok(potential_h_unchecked(params, phi))
}

pub(crate) fn potential_h_unchecked(params: &WaveParams, phi: f64) -> f64 {
    (params.mass() - params.pf() * phi.ln()) * phi
}

/// `H(phi) = ((1-c^2)/2 + p/4) phi^2 - (1/2) log(phi^p) phi^2`, the potential
/// part of the phase-plane first integral (`dH/dphi = h`, `H(0+) = 0`).
pub fn potential_energy(params: &WaveParams, phi: f64) -> f64 {
    if phi == 0.0 {
        return 0.0;
    }
    let p = params.pf();
    (0.5 * params.mass() + 0.25 * p - 0.5 * p * phi.ln()) * phi * phi
}

/// First integral `-xi^2/2 + H(phi)` of the standing-wave ODE, with the sign
/// convention that makes the center a maximum.
pub fn hamiltonian(params: &WaveParams, pt: PhasePoint) -> Result<f64> {
    if !(pt.phi > 0.0) {
        return Err(Error::Domain(format!("hamiltonian requires phi > 0, got {}", pt.phi)));
    }
    Ok(-0.5 * pt.xi * pt.xi + potential_energy(params, pt.phi))
}

/// Equilibria of the positive half-plane together with the homoclinic peak.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibria {
    pub saddle: PhasePoint,
    pub center: PhasePoint,
    pub homoclinic_amplitude: f64,
}

pub fn equilibria(params: &WaveParams) -> Equilibria {
    Equilibria {
        saddle: PhasePoint { phi: 0.0, xi: 0.0 },
        center: PhasePoint {
            phi: params.center(),
            xi: 0.0,
        },
        homoclinic_amplitude: params.homoclinic_amplitude(),
    }
}
