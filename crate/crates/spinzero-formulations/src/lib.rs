//! Spin-zero machinery on a 1-D periodic grid, in three formulations: F-I
//! wave-guided velocities from the phase gradient, F-II particle ensembles
//! driven by the classical force plus the quantum potential of their own
//! estimated density, and F-III grid hydrodynamics `(P_k, v_k)` closed by the
//! continuity equation.

mod error;
mod grid;
mod guidance;
mod hydro;
mod particles;
mod quantum;

pub use error::SpinZeroError;
pub use grid::GridField;
pub use guidance::{f1_velocity_field, integrability_check};
pub use hydro::f3_step;
pub use particles::{estimate_density, f2_step, DensityEstimator, ParticleEnsemble};
pub use quantum::{quantum_potential, QuantumPotentialField};

/// Density floor applied inside the quantum-potential stencil; cells below it
/// are flagged rather than divided by.
pub const EPSILON_P: f64 = 1e-12;

/// Largest admissible Courant number `max|v|·dt/a` for the flux-form
/// continuity update.
pub const CFL_LIMIT: f64 = 0.5;
