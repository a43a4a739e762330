use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Lattice(#[from] lattice_core::LatticeError),
    #[error("dimension mismatch: state has {state}, generator has {generator}")]
    DimensionMismatch { state: usize, generator: usize },
    #[error("time step {dt} violates dt·ρ(H)/ħ < 0.5 (spectral bound ρ(H) ≤ {spectral_bound}); require dt < {required}")]
    StepSizeViolation {
        dt: f64,
        spectral_bound: f64,
        required: f64,
    },
    #[error("exact-exponential scheme limited to dimension ≤ {max}, got {dim}")]
    ExactExponentialTooLarge { dim: usize, max: usize },
    #[error("norm drift {drift} at step {step} exceeds 1e-10 per step")]
    NormDrift { step: usize, drift: f64 },
    #[error("total exit rate {total_rate} from label {label} gives dt·rate = {product} > 0.1; require dt ≤ {required_dt}")]
    RateOverflow {
        label: usize,
        total_rate: f64,
        product: f64,
        required_dt: f64,
    },
    #[error("time step must be positive, got {0}")]
    NonPositiveDt(f64),
}
