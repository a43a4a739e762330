//! Wave-function-free "de Broglie–Bohm–Bell" dynamics for discrete beables.
//!
//! The state is the pair `(P_n, T̄_nm)` of probabilities and generalized
//! transition rates on the adjacency graph of a Hermitian generator, plus a
//! per-link sign register. The rates evolve autonomously, with no wave
//! function integrated, while the link phases `θ_nm` remain derived quantities that
//! can be reconstructed (up to one global constant) at any time. Stochastic
//! trajectories are sampled from the clipped rates `T = max(0, T̄)`.

mod dynamics;
mod ensemble;
mod error;
mod geometry;
mod state;

pub use dynamics::{evolve_wavefree, step, tbar_dot, StepScheme, WaveFreeSeries};
pub use ensemble::{simulate_wavefree_ensemble, WaveFreeEnsemble};
pub use error::WaveFreeError;
pub use geometry::{Link, LinkGeometry};
pub use state::{
    choose_sign, init_from_polar, reconstruct_phases, SignDecision, WaveFreeDiagnostics,
    WaveFreeState,
};

/// Probability floor below which a label's incident links are frozen.
pub const EPSILON_P: f64 = 1e-12;

/// Tolerance on the α-radicand `4P_nP_m − ħ²J²/|H_nm|²` before a state is
/// declared off the physical manifold.
pub const RADICAND_TOL: f64 = 1e-9;

/// A link is considered to be passing through the crossover point when the
/// ratio `α/(2R_nR_m) = |Re θ|` drops below this value. At the closest
/// approach the sign register is toggled so θ keeps winding instead of
/// retracing.
pub const CROSSOVER_FIRE_RATIO: f64 = 5e-3;

/// Hysteresis: the crossover detector re-arms only after `|Re θ|` has
/// recovered above this value, so one passage fires exactly one flip.
pub const CROSSOVER_ARM_RATIO: f64 = 2e-2;
