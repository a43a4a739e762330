use crate::{LatticeError, C64, HBAR, NORM_TOL};

/// Normalized complex amplitudes `ψ_n` over a finite label set.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexAmplitudeField {
    amps: Vec<C64>,
}

impl ComplexAmplitudeField {
    /// Construct from raw amplitudes. All entries must be finite and the
    /// state normalized to within [`NORM_TOL`].
    pub fn new(amps: Vec<C64>) -> Result<Self, LatticeError> {
        for (n, a) in amps.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(LatticeError::NonFinite(n));
            }
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(LatticeError::NotNormalized {
                norm,
                tol: NORM_TOL,
            });
        }
        Ok(Self { amps })
    }

    /// Construct after rescaling to unit norm. Fails on a zero vector.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self, LatticeError> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(LatticeError::NotNormalized {
                norm,
                tol: NORM_TOL,
            });
        }
        let scale = norm.sqrt().recip();
        for a in &mut amps {
            *a *= scale;
        }
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, n: usize) -> C64 {
        self.amps[n]
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Polar decomposition `ψ_n = R_n e^{i S_n/ħ}`: nonnegative moduli and
/// ħ-scaled phases (units of action).
#[derive(Debug, Clone, PartialEq)]
pub struct PolarField {
    modulus: Vec<f64>,
    phase: Vec<f64>,
}

impl PolarField {
    pub fn new(modulus: Vec<f64>, phase: Vec<f64>) -> Result<Self, LatticeError> {
        if modulus.len() != phase.len() {
            return Err(LatticeError::DimensionMismatch {
                left: modulus.len(),
                right: phase.len(),
            });
        }
        for (n, (&r, &s)) in modulus.iter().zip(&phase).enumerate() {
            if !r.is_finite() || !s.is_finite() {
                return Err(LatticeError::NonFinite(n));
            }
            if r < 0.0 {
                return Err(LatticeError::NegativeModulus { label: n, value: r });
            }
        }
        Ok(Self { modulus, phase })
    }

    pub fn dim(&self) -> usize {
        self.modulus.len()
    }

    pub fn modulus(&self) -> &[f64] {
        &self.modulus
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }
}

/// Probabilities per label, `P_n ≥ 0`, `Σ P_n = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityField {
    p: Vec<f64>,
}

impl ProbabilityField {
    pub fn new(p: Vec<f64>) -> Result<Self, LatticeError> {
        for (n, &x) in p.iter().enumerate() {
            if !x.is_finite() {
                return Err(LatticeError::NonFinite(n));
            }
            if x < 0.0 {
                return Err(LatticeError::NegativeProbability { label: n, value: x });
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(LatticeError::NotNormalized {
                norm: sum,
                tol: NORM_TOL,
            });
        }
        Ok(Self { p })
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn get(&self, n: usize) -> f64 {
        self.p[n]
    }
}

/// `R_n = |ψ_n|`, `S_n = ħ·arg(ψ_n)` with `arg ∈ (−π, π]`. At nodes
/// (`R_n = 0`) the phase is set to 0; the wave function is unchanged by
/// this convention.
pub fn polar_decompose(psi: &ComplexAmplitudeField) -> PolarField {
    let modulus: Vec<f64> = psi.amps().iter().map(|a| a.norm()).collect();
    let phase: Vec<f64> = psi
        .amps()
        .iter()
        .map(|a| {
            if a.re == 0.0 && a.im == 0.0 {
                0.0
            } else {
                // Complex64::arg returns (−π, π]; map −π (re<0, im = −0.0) to π.
                let mut s = a.arg();
                if s <= -std::f64::consts::PI {
                    s = std::f64::consts::PI;
                }
                HBAR * s
            }
        })
        .collect();
    PolarField { modulus, phase }
}

/// `ψ_n = R_n e^{i S_n/ħ}`.
pub fn polar_compose(p: &PolarField) -> Result<ComplexAmplitudeField, LatticeError> {
    let amps: Vec<C64> = p
        .modulus()
        .iter()
        .zip(p.phase())
        .map(|(&r, &s)| C64::from_polar(r, s / HBAR))
        .collect();
    ComplexAmplitudeField::new(amps)
}

/// `P_n = |ψ_n|²`.
pub fn probability(psi: &ComplexAmplitudeField) -> ProbabilityField {
    ProbabilityField {
        p: psi.amps().iter().map(|a| a.norm_sqr()).collect(),
    }
}
