//! J-self-adjoint (pseudo-Hermitian) extensions of symmetric operators with
//! deficiency indices <2,2>.
//!
//! The crate has four layers:
//!
//! * [`defect`]: exact linear algebra on the 4-dimensional defect Krein space,
//!   including the `C_{θ,ω}` family, the `U(2)` parametrization of
//!   extensions and the classification of their `C`-symmetries.
//! * [`schrodinger`]: the 1D Schrödinger operator with a general zero-range
//!   potential at the origin (coupling matrices, bound states, Krein resolvent).
//! * [`dirac`]: the 1D Dirac operator with a point perturbation and its bound
//!   states in the spectral gap.
//! * [`numerics`]: quadrature, root bracketing and finite-difference
//!   discretizations used both by the models and as independent oracles.

pub mod defect;
pub mod dirac;
pub mod error;
pub mod numerics;
pub mod schrodinger;
pub mod spectrum;

pub use error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
