use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpinZeroError {
    #[error("grid needs at least 5 cells, got {0}")]
    GridTooSmall(usize),

    #[error("field length {left} does not match grid size {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("nonpositive grid spacing {0}")]
    BadSpacing(f64),

    #[error("negative probability {value} in cell {cell}")]
    NegativeProbability { cell: usize, value: f64 },

    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),

    #[error("non-finite value in cell {0}")]
    NonFinite(usize),

    #[error("CFL condition violated: max|v|·dt/a = {courant}, dt must be ≤ {required_dt}")]
    CflViolation { courant: f64, required_dt: f64 },

    #[error("phase unwrap ambiguous between cells {k} and {next}: |ΔS| = {delta} ≈ πħ")]
    UnwrapAmbiguity { k: usize, next: usize, delta: f64 },

    #[error("amplitude vanishes in cell {0}, phase undefined")]
    VanishingAmplitude(usize),

    #[error("density estimate underflowed in occupied cell {cell} ({value})")]
    DensityUnderflow { cell: usize, value: f64 },

    #[error("nonpositive mass {0}")]
    BadMass(f64),

    #[error("nonpositive bandwidth {0}")]
    BadBandwidth(f64),

    #[error("empty particle ensemble")]
    EmptyEnsemble,
}
