//! Special functions: orthogonal polynomials, Bessel functions, gamma,
//! spherical harmonics and quadrature.

pub mod bessel;
pub mod dd;
pub mod gamma;
pub mod harmonics;
pub mod orthopoly;
pub mod quad;

pub use bessel::{bessel_j, bessel_j_prime, bessel_j_reduced};
pub use gamma::{gamma, log_factorial, log_gamma, pochhammer};
pub use harmonics::{
    available_harmonics, gegenbauer, harmonic_dimension, real_harmonic, sphere_area,
    SphereQuadrature,
};
pub use orthopoly::{jacobi, jacobi_jet_y, jacobi_y, laguerre, laguerre_jet, PolyJet};
pub use quad::{compensated_sum, gauss_legendre, integrate, QuadOpts};
