//! Core value types for trajectory-based quantum mechanics on discrete label
//! sets: complex amplitude fields, polar (modulus/phase) decomposition, sparse
//! Hermitian generators, probability fields and antisymmetric probability
//! currents. Everything here is an immutable value after construction and safe
//! to share read-only across workers.

mod current;
mod error;
mod field;
mod generator;
pub mod rng;

pub use current::{current, current_from_polar, CurrentField};
pub use error::LatticeError;
pub use field::{
    polar_compose, polar_decompose, probability, ComplexAmplitudeField, PolarField,
    ProbabilityField,
};
pub use generator::HermitianGenerator;

use num_complex::Complex64;

/// Reduced Planck constant in simulation units.
pub const HBAR: f64 = 1.0;

/// Tolerance on `Σ|ψ_n|² = 1` and `Σ P_n = 1` at construction.
pub const NORM_TOL: f64 = 1e-9;

pub type C64 = Complex64;
