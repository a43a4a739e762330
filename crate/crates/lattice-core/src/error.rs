use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("amplitude at label {0} is not finite")]
    NonFinite(usize),
    #[error("state is not normalized: Σ|ψ|² = {norm}, tolerance {tol}")]
    NotNormalized { norm: f64, tol: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("entry ({n},{m}) violates Hermiticity: H_nm = {forward}, H_mn = {backward}")]
    NotHermitian {
        n: usize,
        m: usize,
        forward: num_complex::Complex64,
        backward: num_complex::Complex64,
    },
    #[error("diagonal entry ({0},{0}) has non-zero imaginary part {1}")]
    ComplexDiagonal(usize, f64),
    #[error("entry index ({n},{m}) out of bounds for dimension {dim}")]
    IndexOutOfBounds { n: usize, m: usize, dim: usize },
    #[error("negative modulus {value} at label {label}")]
    NegativeModulus { label: usize, value: f64 },
    #[error("negative probability {value} at label {label}")]
    NegativeProbability { label: usize, value: f64 },
}
