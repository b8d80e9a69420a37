//! `d''(c)` by two routes and the orbital-stability verdict.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PeriodicProfile, WaveParams};
use crate::spectral::{
    beta_minimum, count_inertia, gamma_minimum, kappa_minimum, lambda0_closed_form, matrix_operator_eigenvalues,
    MatrixOperator, DEFAULT_ZERO_TOLERANCE,
};
use crate::standing_waves::{continue_branch, Branch};

/// Branch step used for the finite-difference route.
pub const FD_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Stable,
    UnstableEven,
    OutsideTheory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub params: WaveParams,
    pub period: f64,
    pub l2_norm_sq: f64,
    pub d2: f64,
    pub d2_fd: f64,
    pub lambda0: f64,
    pub beta: f64,
    pub gamma_min: f64,
    pub kappa: f64,
    pub re_index: (usize, usize),
    pub im_index: (usize, usize),
    pub verdict: Verdict,
}

/// `d''(c) = (4c^2/p - 1) |phi_c|^2`.
pub fn d_second_derivative(profile: &PeriodicProfile) -> f64 {
    let WaveParams { p, c } = profile.params;
    (4.0 * c * c / p as f64 - 1.0) * profile.l2_norm_sq()
}

/// Centre value `c`, `|phi_c|^2` and the finite-difference derivative of
/// `|phi_c|^2` in `c` at the middle of an evenly spaced branch. Uses the
/// 3-point stencil, Richardson-extrapolated with the doubled step when the
/// branch has at least five points.
pub fn norm_derivative_fd(branch: &Branch) -> Result<(f64, f64, f64)> {
    let len = branch.len();
    if len < 3 || len.is_multiple_of(2) {
        return Err(Error::BranchTooShort(len));
    }
    let mid = len / 2;
    let cs = branch.c_values();
    let norms: Vec<f64> = branch.profiles.iter().map(|p| p.l2_norm_sq()).collect();
    let h = cs[mid + 1] - cs[mid];
    let d1 = (norms[mid + 1] - norms[mid - 1]) / (2.0 * h);
    let derivative = if len >= 5 {
        let d2 = (norms[mid + 2] - norms[mid - 2]) / (4.0 * h);
        (4.0 * d1 - d2) / 3.0
    } else {
        d1
    };
    Ok((cs[mid], norms[mid], derivative))
}

/// `d''(c) = -|phi_c|^2 - c d/dc |phi_c|^2` from branch data.
pub fn d_second_derivative_fd(branch: &Branch) -> Result<f64> {
    let (c, norm, derivative) = norm_derivative_fd(branch)?;
    Ok(-norm - c * derivative)
}

/// Five-point fixed-period branch centred at `c` with step [`FD_STEP`].
pub fn fd_branch(params: &WaveParams, period: f64, n: usize) -> Result<Branch> {
    continue_branch(params.p, params.c, period, 2.0 * FD_STEP, 5, n)
}

/// Spectral quantities entering the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralInputs {
    pub lambda0: f64,
    pub beta: f64,
    pub gamma_min: f64,
    pub kappa: f64,
    pub re_index: (usize, usize),
    pub im_index: (usize, usize),
}

impl SpectralInputs {
    pub fn compute(profile: &PeriodicProfile, modes: usize) -> Result<Self> {
        let params = profile.params;
        let re = matrix_operator_eigenvalues(&MatrixOperator::re(profile), 2 * modes, modes)?;
        let im = matrix_operator_eigenvalues(&MatrixOperator::im(profile), 2 * modes, modes)?;
        Ok(Self {
            lambda0: lambda0_closed_form(params.p, params.c).0,
            beta: beta_minimum(profile, modes)?,
            gamma_min: gamma_minimum(profile, modes)?,
            kappa: kappa_minimum(profile, modes)?,
            re_index: count_inertia(&re, DEFAULT_ZERO_TOLERANCE)?,
            im_index: count_inertia(&im, DEFAULT_ZERO_TOLERANCE)?,
        })
    }
}

/// Verdict from the parameters and the computed quantities. `UnstableEven`
/// is only issued inside the theorem's range of powers.
pub fn verdict(params: &WaveParams, d2: f64, inputs: &SpectralInputs) -> Verdict {
    let p = params.p;
    let c = params.c.abs();
    let threshold = (p as f64).sqrt() / 2.0;
    if !(1..=3).contains(&p) {
        return Verdict::OutsideTheory;
    }
    if c < threshold {
        return Verdict::UnstableEven;
    }
    let stable = c > threshold
        && c < 1.0
        && d2 > 0.0
        && inputs.kappa > 0.0
        && inputs.beta > 0.0
        && inputs.re_index == (1, 1)
        && inputs.im_index == (0, 1);
    if stable {
        Verdict::Stable
    } else {
        Verdict::OutsideTheory
    }
}

/// Assemble the report from precomputed inputs.
pub fn classify(profile: &PeriodicProfile, inputs: &SpectralInputs, d2_fd: f64) -> StabilityReport {
    let d2 = d_second_derivative(profile);
    StabilityReport {
        params: profile.params,
        period: profile.period,
        l2_norm_sq: profile.l2_norm_sq(),
        d2,
        d2_fd,
        lambda0: inputs.lambda0,
        beta: inputs.beta,
        gamma_min: inputs.gamma_min,
        kappa: inputs.kappa,
        re_index: inputs.re_index,
        im_index: inputs.im_index,
        verdict: verdict(&profile.params, d2, inputs),
    }
}

/// Full analysis of the wave with speed `c` and the given period: the centre
/// profile of a five-point branch feeds the spectral inputs.
pub fn analyze(params: &WaveParams, period: f64, n: usize, modes: usize) -> Result<StabilityReport> {
    let branch = fd_branch(params, period, n)?;
    let d2_fd = d_second_derivative_fd(&branch)?;
    let profile = &branch.profiles[branch.len() / 2];
    let inputs = SpectralInputs::compute(profile, modes)?;
    Ok(classify(profile, &inputs, d2_fd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standing_waves::shoot_wave;

    fn inputs(beta: f64, kappa: f64) -> SpectralInputs {
        SpectralInputs {
            lambda0: -1.0,
            beta,
            gamma_min: 0.0,
            kappa,
            re_index: (1, 1),
            im_index: (0, 1),
        }
    }

    #[test]
    fn closed_form_sign_law() {
        let prof = shoot_wave(&WaveParams::new(1, 0.5).unwrap(), 2.5, 64).unwrap().profile;
        assert_eq!(d_second_derivative(&prof), 0.0);
        let prof = shoot_wave(&WaveParams::new(1, 0.6).unwrap(), 2.4, 64).unwrap().profile;
        assert!(d_second_derivative(&prof) > 0.0);
        let prof = shoot_wave(&WaveParams::new(2, 0.5).unwrap(), 1.5, 64).unwrap().profile;
        let d2 = d_second_derivative(&prof);
        assert!((d2 + 0.5 * prof.l2_norm_sq()).abs() < 1e-14 * prof.l2_norm_sq());
    }

    #[test]
    fn verdict_table() {
        let good = inputs(0.1, 0.1);
        assert_eq!(verdict(&WaveParams::new(1, 0.6).unwrap(), 1.0, &good), Verdict::Stable);
        assert_eq!(verdict(&WaveParams::new(1, -0.6).unwrap(), 1.0, &good), Verdict::Stable);
        assert_eq!(verdict(&WaveParams::new(1, 0.3).unwrap(), -1.0, &good), Verdict::UnstableEven);
        assert_eq!(verdict(&WaveParams::new(4, 0.9).unwrap(), -1.0, &good), Verdict::OutsideTheory);
        assert_eq!(verdict(&WaveParams::new(1, 0.5).unwrap(), 0.0, &good), Verdict::OutsideTheory);
        assert_eq!(verdict(&WaveParams::new(1, 1.2).unwrap(), 1.0, &good), Verdict::OutsideTheory);
        assert_eq!(verdict(&WaveParams::new(2, 0.9).unwrap(), 1.0, &inputs(-0.1, 0.1)), Verdict::OutsideTheory);
        assert_eq!(verdict(&WaveParams::new(2, 0.9).unwrap(), 1.0, &inputs(0.1, 0.0)), Verdict::OutsideTheory);
    }

    #[test]
    fn short_branch_rejected() {
        let b = Branch {
            params_list: vec![],
            profiles: vec![],
            amplitudes: vec![],
        };
        assert_eq!(d_second_derivative_fd(&b), Err(Error::BranchTooShort(0)));
    }
}
