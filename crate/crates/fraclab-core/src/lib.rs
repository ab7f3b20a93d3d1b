//! Numerical laboratory for the space-time fractional diffusion equation
//!
//!   d_t^alpha (u - u0) + L u = f   in Omega x [0,T],   u = 0 outside Omega,
//!
//! where d_t^alpha is the Riemann-Liouville derivative of the shifted field
//! (the generalized Caputo form) and L is a symmetric nonlocal integral
//! operator with the fractional Laplacian as the canonical case.
//!
//! The crate provides the scalar special functions, discrete time-fractional
//! calculus, operator assembly and validation, spectral and time-stepping
//! solvers, the fractional Duhamel representation, single-point inverse
//! source reconstruction, and a verification harness for maximum principles
//! and the weak Harnack inequality.

pub mod error;
pub mod mesh;
pub mod timefrac;
pub mod special;

pub use error::{Error, Result};
