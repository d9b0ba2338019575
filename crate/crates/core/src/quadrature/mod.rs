//! Closed-form complex Gaussian integrals and polar quadrature over `ℂ`.
//!
//! The polar rule is the independent oracle for every closed-form norm and
//! pairing elsewhere in the crate.

pub mod gauss_legendre;
mod matrix;
mod polar;

pub use matrix::{gaussian_integral, ComplexSymMatrix};
pub use polar::{weighted_lp_integral, weighted_pairing, PolarGrid, TailModel};
