use lattice_core::{ComplexAmplitudeField, HermitianGenerator, C64, HBAR};
use nalgebra::{DMatrix, DVector};

use crate::SolverError;

const EXACT_EXP_MAX_DIM: usize = 4096;
const NORM_DRIFT_PER_STEP: f64 = 1e-10;

/// Integration scheme for one unitary step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrationScheme {
    /// Crank–Nicolson-style implicit midpoint: exactly norm-preserving in
    /// exact arithmetic, O(dt³) local error.
    ImplicitMidpoint,
    /// Spectral decomposition `U e^{−iEt/ħ} U†`; exact up to the
    /// eigendecomposition, permitted only for small dimensions.
    ExactExponential,
}

enum Propagator {
    Midpoint {
        // (1 + i dt H / 2ħ) ψ' = (1 − i dt H / 2ħ) ψ
        lu: nalgebra::LU<C64, nalgebra::Dyn, nalgebra::Dyn>,
        rhs: DMatrix<C64>,
    },
    Spectral {
        vectors: DMatrix<C64>,
        phases: DVector<C64>,
    },
}

/// One-step unitary propagator for a fixed generator and time step.
pub struct UnitaryIntegrator {
    h: HermitianGenerator,
    dt: f64,
    scheme: IntegrationScheme,
    propagator: Propagator,
}

impl UnitaryIntegrator {
    pub fn new(
        h: HermitianGenerator,
        dt: f64,
        scheme: IntegrationScheme,
    ) -> Result<Self, SolverError> {
        if !(dt > 0.0) {
            return Err(SolverError::NonPositiveDt(dt));
        }
        let n = h.dim();
        let dense = DMatrix::from_fn(n, n, |r, c| h.get(r, c));
        let propagator = match scheme {
            IntegrationScheme::ImplicitMidpoint => {
                let bound = h.gershgorin_bound();
                if dt * bound / HBAR >= 0.5 {
                    return Err(SolverError::StepSizeViolation {
                        dt,
                        spectral_bound: bound,
                        required: 0.5 * HBAR / bound,
                    });
                }
                let half = C64::new(0.0, dt / (2.0 * HBAR));
                let eye = DMatrix::<C64>::identity(n, n);
                let lhs = &eye + &dense * half;
                let rhs = &eye - &dense * half;
                Propagator::Midpoint { lu: lhs.lu(), rhs }
            }
            IntegrationScheme::ExactExponential => {
                if n > EXACT_EXP_MAX_DIM {
                    return Err(SolverError::ExactExponentialTooLarge {
                        dim: n,
                        max: EXACT_EXP_MAX_DIM,
                    });
                }
                let eig = dense.symmetric_eigen();
                let phases = eig
                    .eigenvalues
                    .map(|e| C64::from_polar(1.0, -e * dt / HBAR));
                Propagator::Spectral {
                    vectors: eig.eigenvectors,
                    phases,
                }
            }
        };
        Ok(Self {
            h,
            dt,
            scheme,
            propagator,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn scheme(&self) -> IntegrationScheme {
        self.scheme
    }

    pub fn generator(&self) -> &HermitianGenerator {
        &self.h
    }

    /// Advance raw amplitudes by one step.
    pub fn step(&self, psi: &[C64]) -> Vec<C64> {
        let v = DVector::from_column_slice(psi);
        let out = match &self.propagator {
            Propagator::Midpoint { lu, rhs } => {
                let b = rhs * v;
                lu.solve(&b).expect("midpoint system is nonsingular")
            }
            Propagator::Spectral { vectors, phases } => {
                let mut coeffs = vectors.adjoint() * v;
                for (c, p) in coeffs.iter_mut().zip(phases.iter()) {
                    *c *= p;
                }
                vectors * coeffs
            }
        };
        out.as_slice().to_vec()
    }

    /// Time series `ψ(0), ψ(dt), …, ψ(steps·dt)`; norm drift is checked at
    /// every step.
    pub fn evolve(
        &self,
        psi0: &ComplexAmplitudeField,
        steps: usize,
    ) -> Result<Vec<ComplexAmplitudeField>, SolverError> {
        if psi0.dim() != self.h.dim() {
            return Err(SolverError::DimensionMismatch {
                state: psi0.dim(),
                generator: self.h.dim(),
            });
        }
        let mut series = Vec::with_capacity(steps + 1);
        series.push(psi0.clone());
        let mut raw: Vec<C64> = psi0.amps().to_vec();
        let mut prev_norm = psi0.norm_sqr();
        for step in 1..=steps {
            raw = self.step(&raw);
            let norm: f64 = raw.iter().map(|a| a.norm_sqr()).sum();
            let drift = (norm - prev_norm).abs();
            if drift > NORM_DRIFT_PER_STEP {
                return Err(SolverError::NormDrift { step, drift });
            }
            prev_norm = norm;
            series.push(ComplexAmplitudeField::new(raw.clone())?);
        }
        Ok(series)
    }
}
