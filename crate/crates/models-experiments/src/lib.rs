//! Model Hamiltonians (ring particle, two-level spin, and their tensor
//! product) plus the worked experiments built on them: rate calibration for
//! the two-level closed form, the closed-form comparison run, and the
//! continuum limit of the ring velocity law.

mod continuum;
mod error;
mod models;
mod spin;

pub use continuum::{continuum_limit_experiment, ContinuumReport, PacketSpec};
pub use error::ModelError;
pub use models::{build_circle, build_particle_spin, build_spin_half, CircleModel, SpinHalfModel};
pub use spin::{
    calibrate_gamma, reference_p2_series, spin_closed_form_experiment, AnalyticSpinSolution,
    CalibratedGamma, SpinClosedFormReport,
};
