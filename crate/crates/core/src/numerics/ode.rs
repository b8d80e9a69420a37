//! Dormand-Prince 5(4) integrator with step-size control.
//!
//! The state is a fixed-size array so the small systems used here (the
//! standing-wave ODE and its variational companions) stay on the stack.

use crate::error::{Error, Result};

/// Absolute / relative error tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            atol: 1e-12,
            rtol: 1e-10,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (coef, k) in terms {
        for i in 0..N {
            out[i] += coef * k[i];
        }
    }
    out
}

/// One explicit Dormand-Prince step of size `h`. Returns the fifth-order
/// solution and the embedded error estimate.
pub fn dopri_step<const N: usize, F>(rhs: &F, t: f64, y: &[f64; N], h: f64) -> ([f64; N], [f64; N])
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let k1 = rhs(t, y);
    let k2 = rhs(t + C2 * h, &axpy(y, &[(h * A21, &k1)]));
    let k3 = rhs(t + C3 * h, &axpy(y, &[(h * A31, &k1), (h * A32, &k2)]));
    let k4 = rhs(
        t + C4 * h,
        &axpy(y, &[(h * A41, &k1), (h * A42, &k2), (h * A43, &k3)]),
    );
    let k5 = rhs(
        t + C5 * h,
        &axpy(
            y,
            &[(h * A51, &k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)],
        ),
    );
    let k6 = rhs(
        t + h,
        &axpy(
            y,
            &[
                (h * A61, &k1),
                (h * A62, &k2),
                (h * A63, &k3),
                (h * A64, &k4),
                (h * A65, &k5),
            ],
        ),
    );
    let y1 = axpy(
        y,
        &[(h * B1, &k1), (h * B3, &k3), (h * B4, &k4), (h * B5, &k5), (h * B6, &k6)],
    );
    let k7 = rhs(t + h, &y1);
    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (y1, err)
}

/// Adaptive integrator holding the current point of a trajectory.
pub struct Integrator<F, const N: usize> {
    rhs: F,
    tol: Tolerance,
    t: f64,
    y: [f64; N],
    h: f64,
    max_steps: usize,
    steps: usize,
}

impl<F, const N: usize> Integrator<F, N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    pub fn new(rhs: F, t0: f64, y0: [f64; N], tol: Tolerance) -> Self {
        Self {
            rhs,
            tol,
            t: t0,
            y: y0,
            h: 1e-3,
            max_steps: 10_000_000,
            steps: 0,
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> [f64; N] {
        self.y
    }

    pub fn rhs(&self) -> &F {
        &self.rhs
    }

    fn error_norm(&self, y0: &[f64; N], y1: &[f64; N], err: &[f64; N]) -> f64 {
        let mut acc = 0.0;
        for i in 0..N {
            let scale = self.tol.atol + self.tol.rtol * y0[i].abs().max(y1[i].abs());
            let r = err[i] / scale;
            acc += r * r;
        }
        (acc / N as f64).sqrt()
    }

    /// Take one accepted step, never stepping past `t_limit`.
    pub fn step(&mut self, t_limit: f64) -> Result<()> {
        let span = t_limit - self.t;
        if span <= 0.0 {
            return Ok(());
        }
        loop {
            self.steps += 1;
            if self.steps > self.max_steps {
                return Err(Error::IntegrationFailure(format!(
                    "step budget exhausted at t = {}",
                    self.t
                )));
            }
            let mut h = self.h.min(span);
            // Avoid leaving a sliver before the limit.
            if span - h < 1e-3 * h {
                h = span;
            }
            let (y1, err) = dopri_step(&self.rhs, self.t, &self.y, h);
            let en = self.error_norm(&self.y, &y1, &err);
            if !en.is_finite() {
                self.h = h * 0.1;
                if self.h < 1e-14 * (1.0 + self.t.abs()) {
                    return Err(Error::IntegrationFailure(format!(
                        "non-finite state near t = {}",
                        self.t
                    )));
                }
                continue;
            }
            let factor = if en == 0.0 {
                5.0
            } else {
                (0.9 * en.powf(-0.2)).clamp(0.2, 5.0)
            };
            if en <= 1.0 {
                self.t = if h == span { t_limit } else { self.t + h };
                self.y = y1;
                // Keep the controller's suggestion when the step was clipped.
                self.h = if h < self.h { self.h.max(h * factor) } else { h * factor };
                return Ok(());
            }
            self.h = h * factor.min(1.0);
            if self.h < 1e-14 * (1.0 + self.t.abs()) {
                return Err(Error::IntegrationFailure(format!(
                    "step size underflow at t = {}",
                    self.t
                )));
            }
        }
    }

    /// Integrate until exactly `t_end`.
    pub fn advance_to(&mut self, t_end: f64) -> Result<[f64; N]> {
        while self.t < t_end {
            self.step(t_end)?;
        }
        Ok(self.y)
    }
}

/// Integrate from `(t0, y0)` to `t1` in one call.
pub fn solve<const N: usize, F>(rhs: F, t0: f64, y0: [f64; N], t1: f64, tol: Tolerance) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    Integrator::new(rhs, t0, y0, tol).advance_to(t1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_one_period() {
        let rhs = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let y = solve(rhs, 0.0, [1.0, 0.0], 2.0 * std::f64::consts::PI, Tolerance::default()).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-9);
        assert!(y[1].abs() < 1e-9);
    }

    #[test]
    fn exponential_growth() {
        let rhs = |_t: f64, y: &[f64; 1]| [y[0]];
        let y = solve(rhs, 0.0, [1.0], 3.0, Tolerance { atol: 1e-14, rtol: 1e-12 }).unwrap();
        assert!((y[0] - 3f64.exp()).abs() < 1e-9);
    }
}
