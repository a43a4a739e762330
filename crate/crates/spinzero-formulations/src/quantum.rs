use crate::{SpinZeroError, EPSILON_P};
use lattice_core::HBAR;

/// The quantum potential `Q_k = −(ħ²/2m)·D²(√P)_k/√P_k` per cell, with `D²`
/// the periodic central second difference.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumPotentialField {
    q: Vec<f64>,
    floor_events: usize,
}

impl QuantumPotentialField {
    pub fn values(&self) -> &[f64] {
        &self.q
    }

    /// Cells where `P` had to be floored to [`EPSILON_P`] inside the stencil.
    pub fn floor_events(&self) -> usize {
        self.floor_events
    }
}

pub fn quantum_potential(
    p: &[f64],
    spacing: f64,
    mass: f64,
) -> Result<QuantumPotentialField, SpinZeroError> {
    if p.len() < 5 {
        return Err(SpinZeroError::GridTooSmall(p.len()));
    }
    if !(spacing > 0.0) {
        return Err(SpinZeroError::BadSpacing(spacing));
    }
    if !(mass > 0.0) {
        return Err(SpinZeroError::BadMass(mass));
    }
    let n = p.len();
    let mut floor_events = 0;
    let r: Vec<f64> = p
        .iter()
        .map(|&pk| {
            if pk < EPSILON_P {
                floor_events += 1;
                EPSILON_P.sqrt()
            } else {
                pk.sqrt()
            }
        })
        .collect();
    let scale = -HBAR * HBAR / (2.0 * mass * spacing * spacing);
    let q = (0..n)
        .map(|k| {
            let d2 = r[(k + 1) % n] - 2.0 * r[k] + r[(k + n - 1) % n];
            scale * d2 / r[k]
        })
        .collect();
    Ok(QuantumPotentialField { q, floor_events })
}
