//! Periodic standing-wave profiles: shooting, period quadrature,
//! amplitude/period inversion and fixed-period continuation in `c`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{potential_energy, Grid, PeriodicProfile, WaveParams};
use crate::numerics::ode::{dopri_step, Integrator, Tolerance};
use crate::numerics::quadrature::GaussLegendre;
use crate::numerics::roots::brent;

/// Relative margin kept from the center and from the homoclinic peak.
pub const AMPLITUDE_MARGIN: f64 = 1e-6;

/// Output of [`shoot_wave`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotResult {
    pub profile: PeriodicProfile,
    pub half_period: f64,
    /// Lower turning point (the minimum of the profile).
    pub turning_min: f64,
    /// Level `B` of the phase-plane first integral on this orbit.
    pub hamiltonian_level: f64,
}

/// Profiles sharing one period, ordered by `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub params_list: Vec<WaveParams>,
    pub profiles: Vec<PeriodicProfile>,
    pub amplitudes: Vec<f64>,
}

impl Branch {
    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn c_values(&self) -> Vec<f64> {
        self.params_list.iter().map(|p| p.c).collect()
    }
}

/// Admissible amplitude interval `(r2 (1 + margin), peak (1 - margin))`.
pub fn amplitude_window(params: &WaveParams) -> (f64, f64) {
    (
        params.center() * (1.0 + AMPLITUDE_MARGIN),
        params.homoclinic_amplitude() * (1.0 - AMPLITUDE_MARGIN),
    )
}

fn check_amplitude(params: &WaveParams, amplitude: f64) -> Result<()> {
    params.validate()?;
    let (lower, upper) = amplitude_window(params);
    if !(amplitude >= lower && amplitude <= upper) {
        return Err(Error::AmplitudeOutOfRange {
            amplitude,
            lower,
            upper,
        });
    }
    Ok(())
}

/// Integrate the standing-wave ODE from the turning point `(amplitude, 0)`,
/// locate the next turning point and resample the closed orbit on `n` nodes.
pub fn shoot_wave(params: &WaveParams, amplitude: f64, n: usize) -> Result<ShotResult> {
    shoot_wave_with(params, amplitude, n, Tolerance::default())
}

pub fn shoot_wave_with(params: &WaveParams, amplitude: f64, n: usize, tol: Tolerance) -> Result<ShotResult> {
    check_amplitude(params, amplitude)?;
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("grid size {n} must be even and >= 4")));
    }
    let rhs = params.profile_rhs();
    let horizon = 100.0 * params.minimal_period();

    let mut integ = Integrator::new(rhs, 0.0, [amplitude, 0.0], tol);
    let (half_period, turning) = loop {
        let (t0, y0) = (integ.t(), integ.y());
        integ.step(horizon)?;
        let y1 = integ.y();
        if y0[1] < 0.0 && y1[1] >= 0.0 {
            let h = integ.t() - t0;
            let tau = brent(|s| dopri_step(&rhs, t0, &y0, s).0[1], 0.0, h, 1e-15 * h.max(1.0), 200)?;
            let y = dopri_step(&rhs, t0, &y0, tau).0;
            break (t0 + tau, y[0]);
        }
        if integ.t() >= horizon {
            return Err(Error::IntegrationFailure(format!(
                "no turning point before x = {horizon}"
            )));
        }
    };
    let period = 2.0 * half_period;
    let grid = Grid::new(n, period)?;

    let mut phi = vec![0.0; n];
    let mut dphi = vec![0.0; n];
    phi[0] = amplitude;
    let mut integ = Integrator::new(rhs, 0.0, [amplitude, 0.0], tol);
    for j in 1..=n / 2 {
        let y = integ.advance_to(grid.node(j))?;
        phi[j] = y[0];
        dphi[j] = y[1];
    }
    dphi[n / 2] = 0.0;
    for j in n / 2 + 1..n {
        phi[j] = phi[n - j];
        dphi[j] = -dphi[n - j];
    }
    let profile = PeriodicProfile {
        params: *params,
        grid,
        phi,
        dphi,
        amplitude,
        period,
    };
    Ok(ShotResult {
        profile,
        half_period,
        turning_min: turning,
        hamiltonian_level: potential_energy(params, amplitude),
    })
}

/// `g(u) = v^2 - 1 - 2 v^2 log v` with `v = 1 + u`; the scaled offset
/// `H(r2 (1+u)) - H(r2) = r2^2 (p/4) g(u)`. Series near `u = 0` avoids the
/// cancellation of the direct form.
fn level_shape(u: f64) -> f64 {
    if u.abs() < 0.1 {
        let mut sum = -2.0 * u * u;
        let mut uk = u * u;
        for k in 3..40 {
            uk *= u;
            let kf = k as f64;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sum -= 4.0 * sign * uk / (kf * (kf - 1.0) * (kf - 2.0));
        }
        sum
    } else {
        let v = 1.0 + u;
        if v == 0.0 {
            return -1.0;
        }
        v * v - 1.0 - 2.0 * v * v * v.ln()
    }
}

/// `H(phi_ref (1 + u)) - H(phi_ref)` without cancellation near the center.
fn level_increment(params: &WaveParams, phi_ref: f64, u: f64) -> f64 {
    let p = params.pf();
    let r2 = params.center();
    let kappa = -0.5 * p * ((phi_ref - r2) / r2).ln_1p();
    phi_ref * phi_ref * (kappa * u * (2.0 + u) + 0.25 * p * level_shape(u))
}

/// Lower turning point of the orbit through `(amplitude, 0)`.
pub fn lower_turning_point(params: &WaveParams, amplitude: f64) -> Result<f64> {
    let r2 = params.center();
    let u_plus = (amplitude - r2) / r2;
    let target = level_shape(u_plus);
    let u_minus = brent(
        |u| level_shape(u) - target,
        -1.0,
        0.0,
        1e-16 * u_plus.abs(),
        400,
    )
    .map_err(|e| Error::RootBracketFailure(format!("lower turning point: {e}")))?;
    Ok(r2 * (1.0 + u_minus))
}

/// Period `2 int dphi / sqrt(2 (H(phi) - B))` between the two turning
/// points, after the substitution `phi = m + w sin s` that removes the
/// inverse-square-root endpoint singularities.
pub fn period_by_quadrature(params: &WaveParams, amplitude: f64) -> Result<f64> {
    check_amplitude(params, amplitude)?;
    let r2 = params.center();
    let upper = amplitude;
    let lower = lower_turning_point(params, amplitude)?;
    if !(lower > 0.0 && lower < r2) {
        return Err(Error::RootBracketFailure(format!(
            "degenerate level: lower turning point {lower}"
        )));
    }
    let half_width = 0.5 * (upper - lower);
    // Each half is measured from its own turning point; the two levels agree
    // to the root-finding tolerance.
    let integrand = |s: f64| -> f64 {
        let (sin, cos) = s.sin_cos();
        let gap = if s >= 0.0 {
            let delta = -half_width * cos * cos / (1.0 + sin);
            level_increment(params, upper, delta / upper)
        } else {
            let delta = half_width * cos * cos / (1.0 - sin);
            level_increment(params, lower, delta / lower)
        };
        if gap <= 0.0 {
            return 0.0;
        }
        half_width * cos / (2.0 * gap).sqrt()
    };
    let rule = GaussLegendre::new(20);
    let lower_half = composite_gauss(&rule, -FRAC_PI_2, 0.0, integrand)?;
    let upper_half = composite_gauss(&rule, 0.0, FRAC_PI_2, integrand)?;
    let period = 2.0 * (lower_half + upper_half);
    if !period.is_finite() {
        return Err(Error::NoConvergence("period quadrature produced a non-finite value".into()));
    }
    Ok(period)
}

/// Composite Gauss-Legendre with panel doubling until two successive
/// estimates agree to `1e-13` relative.
fn composite_gauss<F: Fn(f64) -> f64>(rule: &GaussLegendre, a: f64, b: f64, f: F) -> Result<f64> {
    let estimate = |panels: usize| -> f64 {
        let width = (b - a) / panels as f64;
        (0..panels)
            .map(|i| {
                let lo = a + i as f64 * width;
                rule.integrate(lo, lo + width, &f)
            })
            .sum()
    };
    let mut panels = 1;
    let mut previous = estimate(panels);
    while panels < 4096 {
        panels *= 2;
        let current = estimate(panels);
        if (current - previous).abs() <= 1e-13 * current.abs() {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::NoConvergence("period quadrature did not settle".into()))
}

/// Amplitude whose orbit has the requested period.
pub fn amplitude_for_period(params: &WaveParams, target_period: f64) -> Result<f64> {
    amplitude_for_period_near(params, target_period, None)
}

/// As [`amplitude_for_period`], first trying a narrow bracket around `hint`.
pub fn amplitude_for_period_near(params: &WaveParams, target_period: f64, hint: Option<f64>) -> Result<f64> {
    params.validate()?;
    let minimum = params.minimal_period();
    if !(target_period > minimum) || !target_period.is_finite() {
        return Err(Error::PeriodOutOfRange {
            period: target_period,
            minimum,
        });
    }
    let (lo, hi) = amplitude_window(params);
    let residual = |a: f64| period_by_quadrature(params, a).map(|l| l - target_period);
    let xtol = 1e-15 * hi;

    if let Some(h) = hint.filter(|h| *h > lo && *h < hi) {
        let mut width = 1e-2 * (hi - lo);
        for _ in 0..4 {
            let a = (h - width).max(lo);
            let b = (h + width).min(hi);
            let (fa, fb) = (residual(a)?, residual(b)?);
            if fa.signum() != fb.signum() {
                return solve_bracket(&residual, a, b, xtol);
            }
            width *= 4.0;
        }
    }
    let (flo, fhi) = (residual(lo)?, residual(hi)?);
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::NoConvergence(format!(
            "target period {target_period} outside the resolvable range ({}, {})",
            flo + target_period,
            fhi + target_period
        )));
    }
    solve_bracket(&residual, lo, hi, xtol)
}

fn solve_bracket<F: Fn(f64) -> Result<f64>>(residual: &F, a: f64, b: f64, xtol: f64) -> Result<f64> {
    let mut failure = None;
    let root = brent(
        |x| match residual(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        a,
        b,
        xtol,
        300,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    root.map_err(|e| Error::NoConvergence(format!("amplitude inversion: {e}")))
}

/// Natural-parameter continuation of the fixed-period family `c -> phi_c`.
/// `steps` values of `c` are spread evenly over `[c_center - c_span, c_center + c_span]`.
pub fn continue_branch(p: u32, c_center: f64, period: f64, c_span: f64, steps: usize, n: usize) -> Result<Branch> {
    let cs: Vec<f64> = if steps <= 1 || c_span == 0.0 {
        vec![c_center]
    } else {
        (0..steps)
            .map(|i| c_center - c_span + 2.0 * c_span * i as f64 / (steps - 1) as f64)
            .collect()
    };
    let mut branch = Branch {
        params_list: Vec::with_capacity(cs.len()),
        profiles: Vec::with_capacity(cs.len()),
        amplitudes: Vec::with_capacity(cs.len()),
    };
    let mut hint = None;
    for c in cs {
        let wrap = |e: Error| Error::Branch { c, source: Box::new(e) };
        let params = WaveParams::new(p, c).map_err(wrap)?;
        let amplitude = amplitude_for_period_near(&params, period, hint).map_err(wrap)?;
        let shot = shoot_wave(&params, amplitude, n).map_err(wrap)?;
        hint = Some(amplitude);
        branch.params_list.push(params);
        branch.profiles.push(shot.profile);
        branch.amplitudes.push(amplitude);
    }
    Ok(branch)
}

/// Samples of the Gaussian solitary wave `e^{1/2 + (1-c^2)/p} e^{-p x^2/4}`
/// centred at node 0 (nodes past `L/2` are read as negative `x`).
pub fn gaussian_solitary(params: &WaveParams, grid: Grid) -> Result<PeriodicProfile> {
    params.validate()?;
    let amplitude = params.homoclinic_amplitude();
    let p = params.pf();
    let half = 0.5 * grid.length;
    let tail = amplitude * (-p * half * half / 4.0).exp();
    if tail >= 1e-12 {
        return Err(Error::DomainTooSmall(format!(
            "tail value {tail:e} at x = L/2 = {half}"
        )));
    }
    let xs: Vec<f64> = (0..grid.n)
        .map(|j| {
            let x = grid.node(j);
            if j < grid.n / 2 { x } else { x - grid.length }
        })
        .collect();
    let phi: Vec<f64> = xs.iter().map(|x| amplitude * (-p * x * x / 4.0).exp()).collect();
    let dphi = xs.iter().zip(&phi).map(|(x, f)| -0.5 * p * x * f).collect();
    Ok(PeriodicProfile {
        params: *params,
        grid,
        phi,
        dphi,
        amplitude,
        period: grid.length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_shape_series_matches_direct_form() {
        for u in [-0.099, -0.05, -1e-3, 1e-3, 0.05, 0.0999] {
            let v: f64 = 1.0 + u;
            let direct = v * v - 1.0 - 2.0 * v * v * v.ln();
            assert!((level_shape(u) - direct).abs() < 1e-13 * direct.abs().max(1e-3), "u = {u}");
        }
        assert_eq!(level_shape(-1.0), -1.0);
        // homoclinic level: v^2 = e
        assert!((level_shape(0.5f64.exp() - 1.0) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn level_increment_matches_potential_difference() {
        let params = WaveParams::new(2, 0.4).unwrap();
        for (phi, u) in [(1.7, -0.2), (0.9, 0.3), (1.2, 1e-3)] {
            let direct = potential_energy(&params, phi * (1.0 + u)) - potential_energy(&params, phi);
            let fine = level_increment(&params, phi, u);
            assert!((direct - fine).abs() < 1e-12, "{direct} vs {fine}");
        }
    }

    #[test]
    fn lower_turning_point_is_on_the_level() {
        let params = WaveParams::new(1, 0.5).unwrap();
        let low = lower_turning_point(&params, 2.5).unwrap();
        assert!(low < params.center());
        let b = potential_energy(&params, 2.5);
        assert!((potential_energy(&params, low) - b).abs() < 1e-14);
    }

    #[test]
    fn amplitude_outside_window_rejected() {
        let params = WaveParams::new(1, 0.5).unwrap();
        for a in [1.0, params.center(), params.homoclinic_amplitude(), 5.0] {
            assert!(matches!(shoot_wave(&params, a, 64), Err(Error::AmplitudeOutOfRange { .. })));
            assert!(matches!(period_by_quadrature(&params, a), Err(Error::AmplitudeOutOfRange { .. })));
        }
    }

    #[test]
    fn period_below_minimum_rejected() {
        let params = WaveParams::new(4, 0.5).unwrap();
        assert!(matches!(
            amplitude_for_period(&params, 3.0),
            Err(Error::PeriodOutOfRange { .. })
        ));
    }

    #[test]
    fn gaussian_tail_check() {
        let params = WaveParams::new(1, 0.5).unwrap();
        assert!(matches!(
            gaussian_solitary(&params, Grid::new(64, 4.0).unwrap()),
            Err(Error::DomainTooSmall(_))
        ));
        let g = gaussian_solitary(&WaveParams::new(2, 0.0).unwrap(), Grid::new(128, 20.0).unwrap()).unwrap();
        assert!((g.phi[0] - std::f64::consts::E).abs() < 1e-15);
        let g = gaussian_solitary(&WaveParams::new(1, 1.0).unwrap(), Grid::new(128, 40.0).unwrap()).unwrap();
        assert!((g.amplitude - 0.5f64.exp()).abs() < 1e-15);
    }
}
