use crate::SpinZeroError;

/// Hydrodynamic state on a periodic 1-D grid `x_k = k·a`: probability mass
/// `P_k` and velocity `v_k` per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    p: Vec<f64>,
    v: Vec<f64>,
    a: f64,
}

impl GridField {
    pub fn new(p: Vec<f64>, v: Vec<f64>, a: f64) -> Result<Self, SpinZeroError> {
        if p.len() < 5 {
            return Err(SpinZeroError::GridTooSmall(p.len()));
        }
        if v.len() != p.len() {
            return Err(SpinZeroError::DimensionMismatch {
                left: v.len(),
                right: p.len(),
            });
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(SpinZeroError::BadSpacing(a));
        }
        let mut total = 0.0;
        for (k, (&pk, &vk)) in p.iter().zip(&v).enumerate() {
            if !pk.is_finite() || !vk.is_finite() {
                return Err(SpinZeroError::NonFinite(k));
            }
            if pk < 0.0 {
                return Err(SpinZeroError::NegativeProbability { cell: k, value: pk });
            }
            total += pk;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(SpinZeroError::NotNormalized(total));
        }
        Ok(Self { p, v, a })
    }

    pub fn cells(&self) -> usize {
        self.p.len()
    }

    pub fn spacing(&self) -> f64 {
        self.a
    }

    /// Periodic domain length `L = N·a`.
    pub fn domain_length(&self) -> f64 {
        self.p.len() as f64 * self.a
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn velocities(&self) -> &[f64] {
        &self.v
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.p, &mut self.v)
    }
}
