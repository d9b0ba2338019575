//! Numerical laboratory for the dual norms of dilated Segal–Bargmann
//! `L^p` spaces `ℋⁿ_{p,α}`.
//!
//! The crate evaluates every closed form in play (monomial norms, Gaussian
//! norms and pairings, the pairing ratio `ℛ_{p,α}` on monomials and on
//! quadratic exponentials), checks each of them against an independent
//! quadrature oracle, and searches numerically for maximizers of `ℛ_{p,α}`
//! over truncated polynomial spaces.

pub mod constants;
pub mod error;
pub mod explorer;
pub mod fock;
pub mod output;
pub mod quadrature;
pub mod ratio;

pub use constants::{c_p, conjugate_exponent, log_gamma, stirling_gap, stirling_remainder, ExponentPair};
pub use error::{Error, Result};
pub use fock::{FockWeight, HoloPoly, MultiIndex, QuadExp};
