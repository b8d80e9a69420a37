//! Reference solution of the forced linear wave equation with zero data and
//! a linear spectral stepper for the same problem.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::Grid;
use crate::numerics::fourier::Spectral;
use crate::numerics::quadrature::GaussLegendre;

const ORACLE_NODES: usize = 40;

/// `w(x, t) = 1/2 int_0^t int_{x-t+tau}^{x+t-tau} f(y, tau) dy dtau` at every
/// grid node, by nested Gauss-Legendre quadrature. Valid for `0 < t < L/4`.
pub fn dalembert_oracle(f: impl Fn(f64, f64) -> f64, grid: &Grid, t: f64) -> Result<Vec<f64>> {
    let limit = 0.25 * grid.length;
    if !(t > 0.0) || t >= limit {
        return Err(Error::WindowViolation { t, limit });
    }
    let rule = GaussLegendre::new(ORACLE_NODES);
    Ok(grid
        .nodes()
        .map(|x| {
            0.5 * rule.integrate(0.0, t, |tau| {
                let r = t - tau;
                rule.integrate(x - r, x + r, |y| f(y, tau))
            })
        })
        .collect())
}

/// Exact per-mode propagator of `w_tt - w_xx + mass w = f` with the forcing
/// frozen at the step midpoint. Exact for time-independent forcing.
#[derive(Debug, Clone)]
pub struct ForcedLinearStepper {
    spectral: Spectral,
    grid: Grid,
    mass: f64,
    dt: f64,
}

impl ForcedLinearStepper {
    pub fn new(grid: Grid, mass: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::InvalidParams(format!("dt = {dt} must be positive")));
        }
        Ok(Self {
            spectral: Spectral::new(grid.n, grid.length),
            grid,
            mass,
            dt,
        })
    }

    /// Solve from zero data to time `t`; returns `w(., t)`.
    pub fn solve(&self, f: impl Fn(f64, f64) -> f64, t: f64) -> Vec<f64> {
        let steps = (t / self.dt - 1e-9).ceil().max(1.0) as usize;
        let dt = t / steps as f64;
        let n = self.grid.n;
        let k = self.spectral.wavenumbers();
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        let mut wt = vec![Complex64::new(0.0, 0.0); n];
        let nodes: Vec<f64> = self.grid.nodes().collect();
        for i in 0..steps {
            let tm = (i as f64 + 0.5) * dt;
            let forcing: Vec<Complex64> = nodes.iter().map(|&x| Complex64::new(f(x, tm), 0.0)).collect();
            let f_hat = self.spectral.to_spectrum(&forcing);
            for m in 0..n {
                let omega = (k[m] * k[m] + self.mass).sqrt();
                let (s, c) = (omega * dt).sin_cos();
                let (s_over, one_minus_cos) = if omega == 0.0 {
                    (dt, 0.5 * dt * dt)
                } else {
                    let half = (0.5 * omega * dt).sin();
                    (s / omega, 2.0 * half * half / (omega * omega))
                };
                let (a, b) = (w[m], wt[m]);
                w[m] = a * c + b * s_over + f_hat[m] * one_minus_cos;
                wt[m] = b * c - a * omega * s + f_hat[m] * s_over;
            }
        }
        self.spectral.from_spectrum(&w).into_iter().map(|z| z.re).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_forcing() {
        let grid = Grid::new(16, 8.0).unwrap();
        let w = dalembert_oracle(|_, _| 1.0, &grid, 1.5).unwrap();
        assert!(w.iter().all(|v| (v - 1.125).abs() < 1e-12));
        let w = dalembert_oracle(|_, _| 0.0, &grid, 1.5).unwrap();
        assert!(w.iter().all(|v| *v == 0.0));
        let s = ForcedLinearStepper::new(grid, 0.0, 0.1).unwrap().solve(|_, _| 1.0, 1.5);
        assert!(s.iter().all(|v| (v - 1.125).abs() < 1e-12));
    }

    #[test]
    fn window_enforced() {
        let grid = Grid::new(16, 8.0).unwrap();
        assert_eq!(
            dalembert_oracle(|_, _| 1.0, &grid, 2.0),
            Err(Error::WindowViolation { t: 2.0, limit: 2.0 })
        );
    }
}
