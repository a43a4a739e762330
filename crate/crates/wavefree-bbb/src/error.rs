use thiserror::Error;

#[derive(Debug, Error)]
pub enum WaveFreeError {
    #[error(transparent)]
    Lattice(#[from] lattice_core::LatticeError),
    #[error("link ({n},{m}): α-radicand {radicand} below tolerance; state has left the physical manifold")]
    ConsistencyViolation { n: usize, m: usize, radicand: f64 },
    #[error("link ({n},{m}) has a zero-modulus endpoint; θ undefined")]
    UndefinedLink { n: usize, m: usize },
    #[error("loop closure defect {defect} on link ({n},{m}) exceeds {tol}; no single-valued phase exists")]
    LoopClosure {
        n: usize,
        m: usize,
        defect: f64,
        tol: f64,
    },
    #[error("adjacency graph is not connected over active links (label {0} unreachable)")]
    NotConnected(usize),
    #[error("step-size control failed: substep below dt/2^{max_halvings} still violates guards at t = {t}")]
    StepSizeFailure { t: f64, max_halvings: u32 },
    #[error("integration failure at t = {t}: {detail}")]
    IntegrationFailure { t: f64, detail: String },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}
