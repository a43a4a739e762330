use serde::{Deserialize, Serialize};

use crate::CliError;

/// Which model the run instantiates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    Circle {
        cells: usize,
        spacing: f64,
        mass: f64,
        #[serde(default)]
        potential: Option<Vec<f64>>,
    },
    SpinHalf {
        mu: f64,
        b: f64,
    },
    ParticleSpin {
        cells: usize,
        spacing: f64,
        mass: f64,
        #[serde(default)]
        potential: Option<Vec<f64>>,
        mu: f64,
        b: f64,
    },
}

impl ModelSpec {
    pub fn dim(&self) -> usize {
        match self {
            ModelSpec::Circle { cells, .. } => *cells,
            ModelSpec::SpinHalf { .. } => 2,
            ModelSpec::ParticleSpin { cells, .. } => 2 * cells,
        }
    }
}

/// Which dynamics runs on the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formulation {
    /// Unitary wave-function integration.
    Reference,
    /// Jump trajectories guided by the integrated wave function.
    F1Guided,
    /// Particle ensemble with a density-estimated quantum potential.
    F2Ensemble,
    /// Grid hydrodynamics in flux form.
    F3Hydro,
    /// Autonomous `(P, T̄)` rate dynamics.
    Wavefree,
}

/// Initial state generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialStateSpec {
    /// Periodized Gaussian modulus, linear phase with whole circulation
    /// quanta so the phase closes around the ring.
    GaussianPacket {
        center: f64,
        width: f64,
        momentum_quanta: i64,
    },
    /// Uniform modulus, `q` circulation quanta.
    PlaneWave { q: i64 },
    /// All probability on one label.
    BasisState { n: usize },
    /// Explicit modulus and phase arrays.
    Explicit { modulus: Vec<f64>, phase: Vec<f64> },
}

/// Optional tolerance overrides; unset fields keep the built-in defaults.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub sup: Option<f64>,
    pub l2: Option<f64>,
}

/// One experiment run, fully determined by this document plus the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub formulation: Formulation,
    pub initial: InitialStateSpec,
    pub dt: f64,
    pub horizon: f64,
    #[serde(default)]
    pub ensemble_size: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Record every k-th step; defaults to every step.
    #[serde(default)]
    pub record_every: Option<usize>,
    /// Deterministic update rule for the wave-free formulation.
    #[serde(default)]
    pub scheme: Option<WavefreeScheme>,
    /// Density-estimator bandwidth for the particle-ensemble formulation;
    /// unset selects the per-cell histogram.
    #[serde(default)]
    pub bandwidth: Option<f64>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WavefreeScheme {
    Explicit,
    Midpoint,
}

impl RunConfig {
    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round().max(1.0) as usize
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(CliError::validation("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(CliError::validation(
                "horizon",
                format!("must be positive, got {}", self.horizon),
            ));
        }
        if let Some(k) = self.record_every {
            if k == 0 {
                return Err(CliError::validation("record_every", "must be at least 1"));
            }
        }
        match &self.model {
            ModelSpec::Circle {
                cells,
                spacing,
                mass,
                potential,
            }
            | ModelSpec::ParticleSpin {
                cells,
                spacing,
                mass,
                potential,
                ..
            } => {
                if *cells < 3 {
                    return Err(CliError::validation("model.cells", "ring needs at least 3 cells"));
                }
                if !(*spacing > 0.0) {
                    return Err(CliError::validation("model.spacing", "must be positive"));
                }
                if !(*mass > 0.0) {
                    return Err(CliError::validation("model.mass", "must be positive"));
                }
                if let Some(v) = potential {
                    if v.len() != *cells {
                        return Err(CliError::validation(
                            "model.potential",
                            format!("has {} entries for {} cells", v.len(), cells),
                        ));
                    }
                }
            }
            ModelSpec::SpinHalf { .. } => {}
        }
        match &self.initial {
            InitialStateSpec::GaussianPacket { width, .. } => {
                if !(*width > 0.0) {
                    return Err(CliError::validation("initial.width", "must be positive"));
                }
                if !matches!(self.model, ModelSpec::Circle { .. }) {
                    return Err(CliError::validation(
                        "initial",
                        "gaussian-packet requires a circle model",
                    ));
                }
            }
            InitialStateSpec::PlaneWave { .. } => {
                if !matches!(self.model, ModelSpec::Circle { .. }) {
                    return Err(CliError::validation(
                        "initial",
                        "plane-wave requires a circle model",
                    ));
                }
            }
            InitialStateSpec::BasisState { n } => {
                if *n >= self.model.dim() {
                    return Err(CliError::validation(
                        "initial.n",
                        format!("label {} out of range for dimension {}", n, self.model.dim()),
                    ));
                }
            }
            InitialStateSpec::Explicit { modulus, phase } => {
                if modulus.len() != self.model.dim() || phase.len() != self.model.dim() {
                    return Err(CliError::validation(
                        "initial",
                        format!(
                            "explicit arrays ({}, {}) do not match model dimension {}",
                            modulus.len(),
                            phase.len(),
                            self.model.dim()
                        ),
                    ));
                }
            }
        }
        let needs_ensemble = matches!(
            self.formulation,
            Formulation::F1Guided | Formulation::F2Ensemble
        );
        match self.ensemble_size {
            Some(0) => {
                return Err(CliError::validation("ensemble_size", "must be at least 1"));
            }
            None if needs_ensemble => {
                return Err(CliError::validation(
                    "ensemble_size",
                    "required for ensemble formulations",
                ));
            }
            _ => {}
        }
        if matches!(
            self.formulation,
            Formulation::F2Ensemble | Formulation::F3Hydro
        ) && !matches!(self.model, ModelSpec::Circle { .. })
        {
            return Err(CliError::validation(
                "formulation",
                "grid formulations require a circle model",
            ));
        }
        if let Some(bw) = self.bandwidth {
            if !(bw > 0.0 && bw.is_finite()) {
                return Err(CliError::validation("bandwidth", "must be positive"));
            }
        }
        Ok(())
    }
}

/// Canonical JSON used for hashing and the manifest echo: serde's stable
/// field order on the typed config, compact separators.
pub fn canonical_json(config: &RunConfig) -> String {
    serde_json::to_string(config).expect("config serializes")
}
