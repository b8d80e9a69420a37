use thiserror::Error;

/// Failures raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("amplitude {amplitude} outside the periodic annulus ({lower}, {upper})")]
    AmplitudeOutOfRange { amplitude: f64, lower: f64, upper: f64 },
    #[error("period {period} outside the admissible window (> {minimum})")]
    PeriodOutOfRange { period: f64, minimum: f64 },
    #[error("ODE integration failed: {0}")]
    IntegrationFailure(String),
    #[error("root bracketing failed: {0}")]
    RootBracketFailure(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("domain too small for the Gaussian tail: {0}")]
    DomainTooSmall(String),
    #[error("eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),
    #[error("degenerate turning point: phi''(0) = {0}")]
    DegenerateTurningPoint(f64),
    #[error("ambiguous zero eigenvalue {eigenvalue} (tolerance {tolerance})")]
    AmbiguousZero { eigenvalue: f64, tolerance: f64 },
    #[error("Floquet/inertia mismatch: theta = {theta}, index = ({n}, {z})")]
    FloquetMismatch { theta: f64, n: usize, z: usize },
    #[error("eigenvalue map has a pole at lambda = 1")]
    PoleAtOne,
    #[error("constraint vectors are numerically degenerate")]
    ConstraintDegenerate,
    #[error("singular linear system: {0}")]
    SingularSystem(String),
    #[error("branch has {0} points, need at least 3")]
    BranchTooShort(usize),
    #[error("branch continuation failed at c = {c}: {source}")]
    Branch { c: f64, source: Box<Error> },
    #[error("non-finite field value at t = {0}")]
    NonFinite(f64),
    #[error("d'Alembert window violated: t = {t} must be < L/4 = {limit}")]
    WindowViolation { t: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
