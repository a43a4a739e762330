use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("ring needs at least 3 cells, got {0}")]
    TooFewCells(usize),

    #[error("nonpositive grid spacing {0}")]
    BadSpacing(f64),

    #[error("nonpositive mass {0}")]
    BadMass(f64),

    #[error("potential has {left} entries for {right} cells")]
    DimensionMismatch { left: usize, right: usize },

    #[error("no oscillation detected in the occupation signal")]
    OscillationNotDetected,

    #[error("closed-form fit failed: residual {residual}")]
    FitFailure { residual: f64 },

    #[error("state is not right-moving: link current J_{{{n}+1,{n}}} = {current}")]
    NotRightMoving { n: usize, current: f64 },

    #[error(transparent)]
    Lattice(#[from] lattice_core::LatticeError),

    #[error(transparent)]
    Solver(#[from] reference_solver::SolverError),

    #[error(transparent)]
    WaveFree(#[from] wavefree_bbb::WaveFreeError),

    #[error(transparent)]
    SpinZero(#[from] spinzero_formulations::SpinZeroError),
}
