//! Exact computations with the free-field realization of the extended affine Lie
//! algebra of `gl2` over a quantum torus, acting on polynomials in the variables
//! `x[n]` (`n` in Z^2), its localization at `e21(m)` and the twisted localizations.

pub mod action;
pub mod algebra;
pub mod error;
pub mod fock;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
