use crate::ModelError;
use lattice_core::{HermitianGenerator, C64, HBAR};

/// Particle on a ring of `cells` sites with spacing `a`: kinetic term from the
/// periodic discrete Laplacian plus a per-cell potential.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleModel {
    pub cells: usize,
    pub spacing: f64,
    pub mass: f64,
    pub potential: Vec<f64>,
}

/// Two-level magnetic moment in a field along x: generator `μB σ_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinHalfModel {
    pub mu: f64,
    pub b: f64,
}

/// Generator with diagonal `V_n + ħ²/(Ma²)` and off-diagonal `−ħ²/(2Ma²)` on
/// nearest ring neighbors, including the wrap link.
pub fn build_circle(
    cells: usize,
    spacing: f64,
    mass: f64,
    potential: &[f64],
) -> Result<HermitianGenerator, ModelError> {
    if cells < 3 {
        return Err(ModelError::TooFewCells(cells));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(ModelError::BadSpacing(spacing));
    }
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(ModelError::BadMass(mass));
    }
    if potential.len() != cells {
        return Err(ModelError::DimensionMismatch {
            left: potential.len(),
            right: cells,
        });
    }
    let kinetic = HBAR * HBAR / (mass * spacing * spacing);
    let mut entries = vec![];
    for n in 0..cells {
        entries.push(((n, n), C64::new(potential[n] + kinetic, 0.0)));
        entries.push(((n, (n + 1) % cells), C64::new(-kinetic / 2.0, 0.0)));
    }
    Ok(HermitianGenerator::from_entries(cells, entries)?)
}

/// Generator `((0, μB), (μB, 0))`; `μB = 0` yields the null generator with
/// fully frozen dynamics.
pub fn build_spin_half(mu: f64, b: f64) -> Result<HermitianGenerator, ModelError> {
    let mut entries = vec![];
    if mu * b != 0.0 {
        entries.push(((0, 1), C64::new(mu * b, 0.0)));
    }
    Ok(HermitianGenerator::from_entries(2, entries)?)
}

/// Tensor sum `H_circle ⊗ 1 + 1 ⊗ H_spin` on labels `n = 2k + s` with `k` the
/// ring cell and `s ∈ {0, 1}` the spin.
pub fn build_particle_spin(
    circle: &CircleModel,
    spin: &SpinHalfModel,
) -> Result<HermitianGenerator, ModelError> {
    let ring = build_circle(circle.cells, circle.spacing, circle.mass, &circle.potential)?;
    let n = circle.cells;
    let mut entries = vec![];
    for (k, kp, h) in ring.links() {
        for s in 0..2 {
            entries.push(((2 * k + s, 2 * kp + s), h));
        }
    }
    for k in 0..n {
        let d = ring.diagonal(k);
        for s in 0..2 {
            entries.push(((2 * k + s, 2 * k + s), C64::new(d, 0.0)));
        }
        if spin.mu * spin.b != 0.0 {
            entries.push(((2 * k, 2 * k + 1), C64::new(spin.mu * spin.b, 0.0)));
        }
    }
    Ok(HermitianGenerator::from_entries(2 * n, entries)?)
}
