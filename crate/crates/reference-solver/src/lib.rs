//! The oracle side of the artifact: unitary integration of the discrete wave
//! equation `iħ ∂ₜψ_n = Σ_m H_nm ψ_m`, plus wave-guided stochastic jump
//! trajectories whose rates are read off the evolving wave function.

mod ensemble;
mod error;
mod integrator;
mod jumps;

pub use ensemble::{
    drive_trajectories, simulate_guided_ensemble, GuidedEnsemble, OccupancySeries,
    TrajectoryRecord,
};
pub use error::SolverError;
pub use integrator::{IntegrationScheme, UnitaryIntegrator};
pub use jumps::{bell_rates, jump_step, JumpRates, EPSILON_P, SAMPLING_CAP_FACTOR};
