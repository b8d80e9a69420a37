//! Spectral analysis of the operators linearised about a standing wave.
//!
//! The scalar Hill operators are
//! `L1 = -d^2 + (1 - c^2) - p - log(phi^p)` and `L2 = -d^2 + (1 - c^2) - log(phi^p)`;
//! the 2x2 block operators are
//! `L_Re = [[-d^2 + 1 - log(phi^p) - p, -c], [-c, 1]]` and
//! `L_Im = [[-d^2 + 1 - log(phi^p), c], [c, 1]]`.
//! All are discretised with the dense Fourier second-derivative matrix on the
//! periodic grid, so the eigenvalue problems are real symmetric.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PeriodicProfile, WaveParams};
use crate::numerics::eigen::{deflate_constraints, symmetric_eigen, symmetric_eigenvalues};
use crate::numerics::fourier::{resample, second_derivative_matrix};
use crate::numerics::ode::{solve, Tolerance};

/// Default half-width of the band treated as a zero eigenvalue.
pub const DEFAULT_ZERO_TOLERANCE: f64 = 1e-6;

/// Profile samples on the discretisation grid used by an eigen-solve.
#[derive(Debug, Clone)]
struct Samples {
    phi: Vec<f64>,
    dphi: Vec<f64>,
    length: f64,
}

impl Samples {
    fn new(profile: &PeriodicProfile, modes: usize) -> Result<Self> {
        if modes < 4 || !modes.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!("modes = {modes} must be even and >= 4")));
        }
        let phi = resample(&profile.phi, modes);
        if phi.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::Domain("resampled profile is not positive".into()));
        }
        Ok(Self {
            phi,
            dphi: resample(&profile.dphi, modes),
            length: profile.grid.length,
        })
    }

    fn n(&self) -> usize {
        self.phi.len()
    }

    fn log_phi_p(&self, p: f64) -> Vec<f64> {
        self.phi.iter().map(|v| p * v.ln()).collect()
    }
}

/// Which scalar operator a [`HillOperator`] represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HillKind {
    L1,
    L2,
}

/// `-d^2 + shift - log(phi^p)` on one period of the profile.
#[derive(Debug, Clone)]
pub struct HillOperator {
    pub kind: HillKind,
    pub profile: PeriodicProfile,
    /// Constant term: `(1 - c^2) - p` for L1, `(1 - c^2)` for L2.
    pub shift: f64,
    /// Samples of `shift - p log(phi)` on the profile grid.
    pub potential: Vec<f64>,
}

impl HillOperator {
    pub fn new(kind: HillKind, profile: &PeriodicProfile) -> Self {
        let params = profile.params;
        let shift = match kind {
            HillKind::L1 => params.mass() - params.pf(),
            HillKind::L2 => params.mass(),
        };
        let potential = profile.phi.iter().map(|v| shift - params.pf() * v.ln()).collect();
        Self {
            kind,
            profile: profile.clone(),
            shift,
            potential,
        }
    }

    pub fn l1(profile: &PeriodicProfile) -> Self {
        Self::new(HillKind::L1, profile)
    }

    pub fn l2(profile: &PeriodicProfile) -> Self {
        Self::new(HillKind::L2, profile)
    }

    /// Dense symmetric discretisation with `modes` grid points.
    pub fn matrix(&self, modes: usize) -> Result<DMatrix<f64>> {
        let s = Samples::new(&self.profile, modes)?;
        let p = self.profile.params.pf();
        let mut a = -second_derivative_matrix(s.n(), s.length);
        for (j, v) in s.phi.iter().enumerate() {
            a[(j, j)] += self.shift - p * v.ln();
        }
        Ok(a)
    }
}

/// The `m` smallest eigenvalues of a Hill operator, ascending.
pub fn hill_eigenvalues(op: &HillOperator, m: usize, modes: usize) -> Result<Vec<f64>> {
    let mut values = symmetric_eigenvalues(op.matrix(modes)?)?;
    values.truncate(m);
    Ok(values)
}

/// Columns of the table of Floquet constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaTableRow {
    pub p: u32,
    pub phi0: f64,
    pub dphi0: f64,
    pub ddphi0: f64,
    pub ybar0: f64,
    pub period: f64,
    pub ybar_l: f64,
    pub dybar_l: f64,
    pub theta: f64,
}

/// Floquet constant of `L1` together with both candidate quotients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloquetData {
    /// `ybar'(L) / phi''(0)`.
    pub theta: f64,
    /// `ybar(L) / phi''(0)`, reported for comparison only.
    pub theta_value_quotient: f64,
    pub row: ThetaTableRow,
}

/// Integrate `-y'' + [(1-c^2) - p - p log(phi)] y = 0` with
/// `y(0) = -1/phi''(0)`, `y'(0) = 0` over one period, carrying `phi` along
/// by the standing-wave ODE itself.
pub fn floquet_theta(profile: &PeriodicProfile) -> Result<FloquetData> {
    floquet_theta_with(profile, Tolerance::default())
}

pub fn floquet_theta_with(profile: &PeriodicProfile, tol: Tolerance) -> Result<FloquetData> {
    let params = profile.params;
    let dd0 = profile.second_derivative_at_peak();
    if dd0.abs() < 1e-10 {
        return Err(Error::DegenerateTurningPoint(dd0));
    }
    let mass = params.mass();
    let p = params.pf();
    let rhs = move |_x: f64, y: &[f64; 4]| {
        let log_p = p * y[0].ln();
        [y[1], (mass - log_p) * y[0], y[3], (mass - p - log_p) * y[2]]
    };
    let ybar0 = -1.0 / dd0;
    let end = solve(rhs, 0.0, [profile.amplitude, 0.0, ybar0, 0.0], profile.period, tol)?;
    let row = ThetaTableRow {
        p: params.p,
        phi0: profile.amplitude,
        dphi0: 0.0,
        ddphi0: dd0,
        ybar0,
        period: profile.period,
        ybar_l: end[2],
        dybar_l: end[3],
        theta: end[3] / dd0,
    };
    Ok(FloquetData {
        theta: row.theta,
        theta_value_quotient: end[2] / dd0,
        row,
    })
}

/// Eigenvalues, inertial index and Floquet data of one Hill operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HillReport {
    pub kind: HillKind,
    pub eigenvalues: Vec<f64>,
    pub n_negative: usize,
    pub n_zero: usize,
    pub theta: f64,
    pub theta_table_row: ThetaTableRow,
    pub zero_tolerance: f64,
    /// Floquet verdict: the periodic zero eigenvalue is simple iff `theta != 0`.
    pub zero_simple: bool,
}

pub fn hill_report(op: &HillOperator, m: usize, modes: usize, zero_tolerance: f64) -> Result<HillReport> {
    let all = symmetric_eigenvalues(op.matrix(modes)?)?;
    let (n_negative, n_zero) = count_inertia(&all, zero_tolerance)?;
    let floquet = floquet_theta(&op.profile)?;
    Ok(HillReport {
        kind: op.kind,
        eigenvalues: all.into_iter().take(m).collect(),
        n_negative,
        n_zero,
        theta: floquet.theta,
        theta_table_row: floquet.row,
        zero_tolerance,
        zero_simple: floquet.theta != 0.0,
    })
}

/// Count eigenvalues below `-tol` and inside `[-tol, tol]`. Values in the
/// guard band `tol < |lambda| <= 2 tol` are rejected as ambiguous.
pub fn count_inertia(eigenvalues: &[f64], zero_tolerance: f64) -> Result<(usize, usize)> {
    let mut n = 0;
    let mut z = 0;
    for &v in eigenvalues {
        if v.abs() <= zero_tolerance {
            z += 1;
        } else if v.abs() <= 2.0 * zero_tolerance {
            return Err(Error::AmbiguousZero {
                eigenvalue: v,
                tolerance: zero_tolerance,
            });
        } else if v < 0.0 {
            n += 1;
        }
    }
    Ok((n, z))
}

/// Inertial index `(negative count, kernel dimension)` on the profile grid.
pub fn inertial_index(op: &HillOperator, zero_tolerance: f64) -> Result<(usize, usize)> {
    let values = symmetric_eigenvalues(op.matrix(op.profile.grid.n)?)?;
    count_inertia(&values, zero_tolerance)
}

/// A negative Floquet constant forces `L1` to have index (1, 1); report a
/// mismatch between the two routes.
pub fn check_floquet_consistency(theta: f64, index: (usize, usize)) -> Result<()> {
    if theta < 0.0 && index != (1, 1) {
        return Err(Error::FloquetMismatch {
            theta,
            n: index.0,
            z: index.1,
        });
    }
    if theta > 0.0 && index.1 != 1 {
        return Err(Error::FloquetMismatch {
            theta,
            n: index.0,
            z: index.1,
        });
    }
    Ok(())
}

/// `gamma(lambda) = lambda (1 - c^2 / (lambda - 1))`: maps non-positive
/// eigenvalues of `L_Re` to those of `L1`.
pub fn eigenvalue_map_gamma(lambda: f64, c: f64) -> Result<f64> {
    if lambda == 1.0 {
        return Err(Error::PoleAtOne);
    }
    Ok(lambda * (1.0 - c * c / (lambda - 1.0)))
}

/// Closed-form negative eigenvalue of `L_Re` (eigenvector `(phi, m phi)`) and
/// the companion coefficient `m = -c / (lambda0 - 1)`.
pub fn lambda0_closed_form(p: u32, c: f64) -> (f64, f64) {
    let p = p as f64;
    let c2 = c * c;
    let radicand = 1.0 + 2.0 * c2 + 2.0 * p + c2 * c2 - 2.0 * c2 * p + p * p;
    let lambda0 = 0.5 * (1.0 + c2 - p - radicand.sqrt());
    (lambda0, -c / (lambda0 - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixKind {
    Re,
    Im,
}

/// One of the 2x2 block operators `L_Re`, `L_Im`.
#[derive(Debug, Clone)]
pub struct MatrixOperator {
    pub kind: MatrixKind,
    pub profile: PeriodicProfile,
    pub c: f64,
}

impl MatrixOperator {
    pub fn new(kind: MatrixKind, profile: &PeriodicProfile) -> Self {
        Self {
            kind,
            profile: profile.clone(),
            c: profile.params.c,
        }
    }

    pub fn re(profile: &PeriodicProfile) -> Self {
        Self::new(MatrixKind::Re, profile)
    }

    pub fn im(profile: &PeriodicProfile) -> Self {
        Self::new(MatrixKind::Im, profile)
    }

    fn params(&self) -> WaveParams {
        self.profile.params
    }

    /// `[[A, s c I], [s c I, I]]` with `s = -1` for Re and `+1` for Im.
    pub fn matrix(&self, modes: usize) -> Result<DMatrix<f64>> {
        let s = Samples::new(&self.profile, modes)?;
        let n = s.n();
        let p = self.params().pf();
        let (diag_shift, coupling) = match self.kind {
            MatrixKind::Re => (1.0 - p, -self.c),
            MatrixKind::Im => (1.0, self.c),
        };
        let d2 = second_derivative_matrix(n, s.length);
        let mut a = DMatrix::zeros(2 * n, 2 * n);
        a.view_mut((0, 0), (n, n)).copy_from(&(-d2));
        for (j, v) in s.phi.iter().enumerate() {
            a[(j, j)] += diag_shift - p * v.ln();
            a[(j, n + j)] = coupling;
            a[(n + j, j)] = coupling;
            a[(n + j, n + j)] = 1.0;
        }
        Ok(a)
    }

    /// Kernel direction: `(phi', c phi')` for Re, `(phi, -c phi)` for Im.
    pub fn kernel_vector(&self, modes: usize) -> Result<DVector<f64>> {
        let s = Samples::new(&self.profile, modes)?;
        let (top, scale) = match self.kind {
            MatrixKind::Re => (&s.dphi, self.c),
            MatrixKind::Im => (&s.phi, -self.c),
        };
        Ok(stack(top, &top.iter().map(|v| scale * v).collect::<Vec<_>>()))
    }
}

fn stack(top: &[f64], bottom: &[f64]) -> DVector<f64> {
    DVector::from_iterator(top.len() + bottom.len(), top.iter().chain(bottom).copied())
}

/// The `m` smallest eigenvalues of a block operator.
pub fn matrix_operator_eigenvalues(op: &MatrixOperator, m: usize, modes: usize) -> Result<Vec<f64>> {
    let mut values = symmetric_eigenvalues(op.matrix(modes)?)?;
    values.truncate(m);
    Ok(values)
}

/// Eigenpairs of a block operator, ascending.
pub fn matrix_operator_eigenpairs(op: &MatrixOperator, modes: usize) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let e = symmetric_eigen(op.matrix(modes)?)?;
    Ok((e.values, e.vectors))
}

/// `|M k| / |k|` for the kernel direction of the operator.
pub fn kernel_residual(op: &MatrixOperator, modes: usize) -> Result<f64> {
    let k = op.kernel_vector(modes)?;
    let mk = op.matrix(modes)? * &k;
    Ok(mk.norm() / k.norm())
}

/// A constraint direction `(first component, second component)` sampled on
/// the discretisation grid.
pub type Constraint = (Vec<f64>, Vec<f64>);

/// Minimum of `<M v, v>` over unit `v` orthogonal to every constraint.
pub fn constrained_minimum(op: &MatrixOperator, constraints: &[Constraint], modes: usize) -> Result<f64> {
    if constraints.is_empty() || constraints.len() > 2 {
        return Err(Error::InvalidParams("one or two constraints expected".into()));
    }
    let vectors: Vec<DVector<f64>> = constraints
        .iter()
        .map(|(a, b)| {
            if a.len() != modes || b.len() != modes {
                Err(Error::InvalidParams("constraint length must equal modes".into()))
            } else {
                Ok(stack(a, b))
            }
        })
        .collect::<Result<_>>()?;
    let reduced = deflate_constraints(&op.matrix(modes)?, &vectors)?;
    let values = symmetric_eigenvalues(reduced)?;
    Ok(values[0])
}

/// Constraint vectors of the three quadratic-form minima.
pub struct StabilityConstraints {
    /// `(phi log(phi^p), -c phi)`, used with `L_Im`.
    pub beta: Constraint,
    /// `(c phi, phi)`, used with `L_Re`.
    pub charge: Constraint,
    /// `(log(phi^p) phi' + p phi', c phi')`, used with `L_Re`.
    pub translation: Constraint,
}

impl StabilityConstraints {
    pub fn new(profile: &PeriodicProfile, modes: usize) -> Result<Self> {
        let s = Samples::new(profile, modes)?;
        let c = profile.params.c;
        let p = profile.params.pf();
        let logp = s.log_phi_p(p);
        Ok(Self {
            beta: (
                s.phi.iter().zip(&logp).map(|(f, l)| f * l).collect(),
                s.phi.iter().map(|f| -c * f).collect(),
            ),
            charge: (s.phi.iter().map(|f| c * f).collect(), s.phi.clone()),
            translation: (
                s.dphi.iter().zip(&logp).map(|(d, l)| (l + p) * d).collect(),
                s.dphi.iter().map(|d| c * d).collect(),
            ),
        })
    }
}

/// `beta = min <L_Im v, v>` subject to `v _|_ (phi log(phi^p), -c phi)`.
pub fn beta_minimum(profile: &PeriodicProfile, modes: usize) -> Result<f64> {
    let cons = StabilityConstraints::new(profile, modes)?;
    constrained_minimum(&MatrixOperator::im(profile), &[cons.beta], modes)
}

/// `gamma = min <L_Re v, v>` subject to `v _|_ (c phi, phi)`.
pub fn gamma_minimum(profile: &PeriodicProfile, modes: usize) -> Result<f64> {
    let cons = StabilityConstraints::new(profile, modes)?;
    constrained_minimum(&MatrixOperator::re(profile), &[cons.charge], modes)
}

/// `kappa`: as `gamma` with the translation constraint added.
pub fn kappa_minimum(profile: &PeriodicProfile, modes: usize) -> Result<f64> {
    let cons = StabilityConstraints::new(profile, modes)?;
    constrained_minimum(&MatrixOperator::re(profile), &[cons.charge, cons.translation], modes)
}

/// Solve `L_Re (M, N) = (c phi, phi)` on the profile grid with the kernel
/// direction `(phi', c phi')` deflated by a rank-one shift. `M` is the
/// fixed-period derivative `d phi_c / dc` and `N = phi + c M`.
pub fn solve_mn(profile: &PeriodicProfile) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = profile.grid.n;
    let op = MatrixOperator::re(profile);
    let a = op.matrix(n)?;
    let c = profile.params.c;
    let rhs = stack(&profile.phi.iter().map(|f| c * f).collect::<Vec<_>>(), &profile.phi);
    let kernel = op.kernel_vector(n)?;
    let knorm = kernel.norm();
    let mut shifted = a.clone();
    if knorm > 0.0 {
        let k = &kernel / knorm;
        shifted.ger(1.0, &k, &k, 1.0);
    }
    let x = shifted
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SingularSystem("L_Re with kernel deflation".into()))?;
    let residual = (&a * &x - &rhs).norm() / rhs.norm();
    if !residual.is_finite() || residual > 1e-6 {
        return Err(Error::SingularSystem(format!("relative residual {residual:e}")));
    }
    Ok((x.rows(0, n).iter().copied().collect(), x.rows(n, n).iter().copied().collect()))
}

/// `<(M, N), (c phi, phi)>` in `L^2 x L^2`; equals `-d''(c)`.
pub fn mn_inner_product(profile: &PeriodicProfile, m: &[f64], nn: &[f64]) -> f64 {
    let c = profile.params.c;
    let h = profile.grid.spacing();
    profile
        .phi
        .iter()
        .zip(m.iter().zip(nn))
        .map(|(f, (a, b))| c * f * a + f * b)
        .sum::<f64>()
        * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_map_examples() {
        assert_eq!(eigenvalue_map_gamma(0.0, 0.5).unwrap(), 0.0);
        let (l0, _) = lambda0_closed_form(1, 0.5);
        assert!((eigenvalue_map_gamma(l0, 0.5).unwrap() + 1.0).abs() < 1e-14);
        for l in [-3.0, -0.2, 0.4, 2.0] {
            assert_eq!(eigenvalue_map_gamma(l, 0.0).unwrap(), l);
        }
        assert_eq!(eigenvalue_map_gamma(1.0, 0.3), Err(Error::PoleAtOne));
    }

    #[test]
    fn lambda0_examples() {
        let (l0, m) = lambda0_closed_form(1, 0.5);
        assert!((l0 - 0.5 * (0.25 - 4.0625f64.sqrt())).abs() < 1e-15);
        assert!((l0 + 0.882782).abs() < 1e-6);
        assert!((m + 0.5 / (l0 - 1.0)).abs() < 1e-15);
        assert_eq!(lambda0_closed_form(1, 0.0).0, -1.0);
        // gamma(lambda0) = -p for every (p, c)
        for p in 1..6 {
            for c in [-0.9, 0.1, 0.6, 0.95] {
                let (l0, _) = lambda0_closed_form(p, c);
                assert!((eigenvalue_map_gamma(l0, c).unwrap() + p as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inertia_counting_and_guard_band() {
        assert_eq!(count_inertia(&[-1.0, 1e-9, 0.5], 1e-6).unwrap(), (1, 1));
        assert!(matches!(
            count_inertia(&[-1.0, 1.5e-6, 0.5], 1e-6),
            Err(Error::AmbiguousZero { .. })
        ));
        assert!(check_floquet_consistency(-0.5, (1, 1)).is_ok());
        assert!(check_floquet_consistency(-0.5, (2, 1)).is_err());
    }
}
