//! Sharp pointwise constants for derivatives of harmonic functions, Lamé and
//! Stokes fields and analytic functions, together with the numerical
//! machinery that evaluates them and checks them against concrete solutions.

pub mod cli;
pub mod coefficients;
pub mod constants;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
