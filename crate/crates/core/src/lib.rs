//! Numerical library for multiplicative averages of the Poissonized
//! Plancherel measure: elliptic special functions, the equilibrium measure
//! and rate function of the associated log-gas, Fredholm determinants of the
//! Fermi-weighted discrete Bessel kernel, and the matching large-time
//! asymptotic and cylindrical Toda predictions.
//!
//! All public operations are pure functions of immutable inputs and are safe
//! to call concurrently.

pub mod asymptotics;
pub mod elliptic;
pub mod equilibrium;
pub mod error;
pub mod kernels;
pub mod quad;
pub mod selftest;
pub mod toda;

pub use error::{Error, Result};
pub use num_complex::Complex64;
