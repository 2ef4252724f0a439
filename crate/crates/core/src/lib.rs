//! Inverse localization for Schrodinger operators on hyperbolic spaces.

pub mod error;
pub mod geometry;
pub mod heatkernel;
pub mod helmholtz;
pub mod localization;
mod ode;
pub mod specfun;
pub mod spectra;

pub use error::{Error, Result};
