use crate::SpinZeroError;
use lattice_core::{ComplexAmplitudeField, HBAR};

/// Guidance velocity per cell, `v_k = (∂S/∂x)_k/m`, from the unwrapped central
/// difference of the phase `S = ħ·arg ψ`.
///
/// Between neighbors the branch with `|ΔS| ≤ πħ` is chosen; a jump too close
/// to the branch cut is reported instead of silently resolved.
pub fn f1_velocity_field(
    psi: &ComplexAmplitudeField,
    spacing: f64,
    mass: f64,
) -> Result<Vec<f64>, SpinZeroError> {
    if psi.dim() < 5 {
        return Err(SpinZeroError::GridTooSmall(psi.dim()));
    }
    if !(spacing > 0.0) {
        return Err(SpinZeroError::BadSpacing(spacing));
    }
    if !(mass > 0.0) {
        return Err(SpinZeroError::BadMass(mass));
    }
    let n = psi.dim();
    let mut jumps = Vec::with_capacity(n);
    for k in 0..n {
        let next = (k + 1) % n;
        let (a, b) = (psi.amp(k), psi.amp(next));
        if a.norm() == 0.0 {
            return Err(SpinZeroError::VanishingAmplitude(k));
        }
        if b.norm() == 0.0 {
            return Err(SpinZeroError::VanishingAmplitude(next));
        }
        let delta = HBAR * (b * a.conj()).arg();
        if delta.abs() > std::f64::consts::PI * HBAR * (1.0 - 1e-6) {
            return Err(SpinZeroError::UnwrapAmbiguity {
                k,
                next,
                delta: delta.abs(),
            });
        }
        jumps.push(delta);
    }
    Ok((0..n)
        .map(|k| (jumps[k] + jumps[(k + n - 1) % n]) / (2.0 * spacing * mass))
        .collect())
}

/// Residue of the circulation quantization `Σ_k v_k·a·m mod 2πħ` on the
/// periodic loop. Zero (to rounding) iff `v` is a discrete phase gradient.
pub fn integrability_check(v: &[f64], spacing: f64, mass: f64) -> f64 {
    let circulation: f64 = v.iter().map(|vk| vk * spacing * mass).sum();
    let quantum = 2.0 * std::f64::consts::PI * HBAR;
    let r = circulation.rem_euclid(quantum);
    r.min(quantum - r)
}
