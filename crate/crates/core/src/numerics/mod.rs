//! Numerical building blocks: adaptive Runge-Kutta, quadrature, scalar root
//! finding, Fourier helpers and dense symmetric eigen-solves.

pub mod eigen;
pub mod fourier;
pub mod ode;
pub mod quadrature;
pub mod roots;
