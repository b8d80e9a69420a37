//! Periodic standing waves of the logarithmic Klein-Gordon equation
//! `u_tt - u_xx + u - log(|u|^p) u = 0`.
//!
//! * [`model`]: parameters, grids, profiles and phase-plane primitives.
//! * [`standing_waves`]: shooting, period quadrature and fixed-period branches.
//! * [`spectral`]: Hill operators, Floquet constant, inertial indices and the
//!   constrained quadratic-form minima.
//! * [`stability`]: `d''(c)` and the stability verdict.
//! * [`evolution`]: pseudo-spectral time stepping and conserved-quantity
//!   diagnostics.

pub mod error;
pub mod evolution;
pub mod model;
pub mod numerics;
pub mod spectral;
pub mod stability;
pub mod standing_waves;

pub use error::{Error, Result};
pub use model::{Grid, PeriodicProfile, PhasePoint, WaveParams};
pub use num_complex::Complex64;
