//! Fourier pseudo-spectral helpers on a uniform periodic grid.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Angular wavenumbers in FFT storage order. The Nyquist entry (even `n`)
/// carries the positive value `pi n / L`.
pub fn wavenumbers(n: usize, length: f64) -> Vec<f64> {
    let base = 2.0 * PI / length;
    (0..n)
        .map(|m| {
            let signed = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
            base * signed
        })
        .collect()
}

/// Forward/inverse transforms for one grid size, with the unnormalised
/// forward convention `hat(u)_m = sum_j u_j e^{-2 pi i j m / n}`.
#[derive(Clone)]
pub struct Spectral {
    n: usize,
    length: f64,
    k: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

impl Spectral {
    pub fn new(n: usize, length: f64) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            length,
            k: wavenumbers(n, length),
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    pub fn nyquist(&self) -> Option<usize> {
        self.n.is_multiple_of(2).then_some(self.n / 2)
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.forward.process(data);
    }

    /// Inverse transform including the 1/n normalisation.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
        let s = 1.0 / self.n as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }

    pub fn to_spectrum(&self, u: &[Complex64]) -> Vec<Complex64> {
        let mut buf = u.to_vec();
        self.forward(&mut buf);
        buf
    }

    pub fn from_spectrum(&self, spec: &[Complex64]) -> Vec<Complex64> {
        let mut buf = spec.to_vec();
        self.inverse(&mut buf);
        buf
    }

    /// First derivative; the Nyquist mode is dropped so real input stays real.
    pub fn derivative(&self, u: &[Complex64]) -> Vec<Complex64> {
        let mut spec = self.to_spectrum(u);
        for (m, z) in spec.iter_mut().enumerate() {
            if Some(m) == self.nyquist() {
                *z = Complex64::new(0.0, 0.0);
            } else {
                *z *= Complex64::new(0.0, self.k[m]);
            }
        }
        self.from_spectrum(&spec)
    }

    pub fn derivative_real(&self, u: &[f64]) -> Vec<f64> {
        let z: Vec<Complex64> = u.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.derivative(&z).into_iter().map(|z| z.re).collect()
    }

    pub fn second_derivative_real(&self, u: &[f64]) -> Vec<f64> {
        let mut spec: Vec<Complex64> = u.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward(&mut spec);
        for (m, z) in spec.iter_mut().enumerate() {
            *z *= -self.k[m] * self.k[m];
        }
        self.inverse(&mut spec);
        spec.into_iter().map(|z| z.re).collect()
    }

    /// `int |u_x|^2 dx` by Parseval, Nyquist mode included with `k^2`.
    pub fn gradient_norm_sq(&self, u: &[Complex64]) -> f64 {
        let spec = self.to_spectrum(u);
        let n = self.n as f64;
        spec.iter()
            .zip(&self.k)
            .map(|(z, k)| k * k * z.norm_sqr())
            .sum::<f64>()
            * self.length
            / (n * n)
    }

    /// Evaluate the band-limited interpolant of `spec` translated by `y`:
    /// returns samples of `u(x_j + y)`.
    pub fn shift_spectrum(&self, spec: &[Complex64], y: f64) -> Vec<Complex64> {
        let shifted: Vec<Complex64> = spec
            .iter()
            .enumerate()
            .map(|(m, z)| {
                if Some(m) == self.nyquist() {
                    z * (self.k[m] * y).cos()
                } else {
                    z * Complex64::from_polar(1.0, self.k[m] * y)
                }
            })
            .collect();
        self.from_spectrum(&shifted)
    }
}

/// Dense Fourier second-derivative matrix on `n` (even) equispaced points
/// of a period `length`.
pub fn second_derivative_matrix(n: usize, length: f64) -> DMatrix<f64> {
    assert!(n >= 2 && n.is_multiple_of(2), "grid size must be even");
    let h = 2.0 * PI / n as f64;
    let scale = (2.0 * PI / length).powi(2);
    let diag = -PI * PI / (3.0 * h * h) - 1.0 / 6.0;
    let mut column = vec![diag; n];
    for (j, c) in column.iter_mut().enumerate().skip(1) {
        let s = (0.5 * j as f64 * h).sin();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        *c = -0.5 * sign / (s * s);
    }
    DMatrix::from_fn(n, n, |i, j| {
        let d = i.abs_diff(j);
        column[d] * scale
    })
}

/// Band-limited resampling of periodic real samples onto `new_n` points.
pub fn resample(values: &[f64], new_n: usize) -> Vec<f64> {
    let n = values.len();
    if n == new_n {
        return values.to_vec();
    }
    let mut planner = FftPlanner::<f64>::new();
    let mut spec: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut spec);
    let mut out = vec![Complex64::new(0.0, 0.0); new_n];
    let keep = n.min(new_n);
    let half = keep / 2;
    for m in 0..half {
        out[m] = spec[m];
        if m > 0 {
            out[new_n - m] = spec[n - m];
        }
    }
    if keep.is_multiple_of(2) {
        // Split the shared Nyquist coefficient symmetrically.
        let nyq = if n <= new_n {
            spec[n / 2]
        } else {
            0.5 * (spec[half] + spec[n - half])
        };
        if new_n > keep {
            out[half] = 0.5 * nyq;
            out[new_n - half] = 0.5 * nyq;
        } else {
            out[half] = nyq;
        }
    } else {
        out[half] = spec[half];
        out[new_n - half] = spec[n - half];
    }
    planner.plan_fft_inverse(new_n).process(&mut out);
    let s = 1.0 / n as f64;
    out.into_iter().map(|z| z.re * s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_matrix_on_cosine() {
        let n = 32;
        let l = 3.0;
        let d2 = second_derivative_matrix(n, l);
        let k = 2.0 * PI * 3.0 / l;
        let u: Vec<f64> = (0..n).map(|j| (k * j as f64 * l / n as f64).cos()).collect();
        let du = &d2 * nalgebra::DVector::from_vec(u.clone());
        for j in 0..n {
            assert!((du[j] + k * k * u[j]).abs() < 1e-9);
        }
        let spectral = Spectral::new(n, l);
        let du2 = spectral.second_derivative_real(&u);
        for j in 0..n {
            assert!((du2[j] + k * k * u[j]).abs() < 1e-9);
        }
    }

    #[test]
    fn resample_is_exact_for_band_limited() {
        let f = |x: f64| 1.0 + (x).sin() + 0.3 * (3.0 * x).cos();
        let coarse: Vec<f64> = (0..16).map(|j| f(2.0 * PI * j as f64 / 16.0)).collect();
        let fine = resample(&coarse, 64);
        for (j, v) in fine.iter().enumerate() {
            assert!((v - f(2.0 * PI * j as f64 / 64.0)).abs() < 1e-12);
        }
        let back = resample(&fine, 16);
        for (a, b) in back.iter().zip(&coarse) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn fractional_shift() {
        let n = 32;
        let l = 2.0 * PI;
        let s = Spectral::new(n, l);
        let u: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new((j as f64 * l / n as f64).sin(), 0.0))
            .collect();
        let spec = s.to_spectrum(&u);
        let shifted = s.shift_spectrum(&spec, 0.3);
        for (j, z) in shifted.iter().enumerate() {
            assert!((z.re - (j as f64 * l / n as f64 + 0.3).sin()).abs() < 1e-12);
        }
    }
}
