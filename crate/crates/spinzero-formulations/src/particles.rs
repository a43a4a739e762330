use crate::{quantum_potential, GridField, QuantumPotentialField, SpinZeroError, EPSILON_P};

/// F-II ensemble: weighted particles on the periodic domain `[0, N·a)`,
/// moving under the classical force plus the quantum force of their own
/// estimated density.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleEnsemble {
    x: Vec<f64>,
    v: Vec<f64>,
    w: Vec<f64>,
    mass: f64,
    spacing: f64,
    cells: usize,
}

/// Density estimator for [`f2_step`]: per-cell histogram, linear cloud-in-cell
/// deposition, or a periodic Gaussian kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityEstimator {
    Histogram,
    LinearCloud,
    Gaussian { bandwidth: f64 },
}

impl ParticleEnsemble {
    pub fn new(
        x: Vec<f64>,
        v: Vec<f64>,
        mass: f64,
        spacing: f64,
        cells: usize,
    ) -> Result<Self, SpinZeroError> {
        let m = x.len();
        if m == 0 {
            return Err(SpinZeroError::EmptyEnsemble);
        }
        if v.len() != m {
            return Err(SpinZeroError::DimensionMismatch {
                left: v.len(),
                right: m,
            });
        }
        if cells < 5 {
            return Err(SpinZeroError::GridTooSmall(cells));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(SpinZeroError::BadSpacing(spacing));
        }
        if !(mass > 0.0) {
            return Err(SpinZeroError::BadMass(mass));
        }
        for (i, (&xi, &vi)) in x.iter().zip(&v).enumerate() {
            if !xi.is_finite() || !vi.is_finite() {
                return Err(SpinZeroError::NonFinite(i));
            }
        }
        let length = cells as f64 * spacing;
        let x = x.into_iter().map(|xi| xi.rem_euclid(length)).collect();
        let w = vec![1.0 / m as f64; m];
        Ok(Self {
            x,
            v,
            w,
            mass,
            spacing,
            cells,
        })
    }

    /// One weighted particle per cell center, carrying the grid's exact
    /// probability mass and velocity. With the [`DensityEstimator::LinearCloud`]
    /// estimator this makes F-II stepping coincide with F-III.
    pub fn from_grid(g: &GridField, mass: f64) -> Result<Self, SpinZeroError> {
        if !(mass > 0.0) {
            return Err(SpinZeroError::BadMass(mass));
        }
        let n = g.cells();
        let a = g.spacing();
        Ok(Self {
            x: (0..n).map(|k| k as f64 * a).collect(),
            v: g.velocities().to_vec(),
            w: g.probabilities().to_vec(),
            mass,
            spacing: a,
            cells: n,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn positions(&self) -> &[f64] {
        &self.x
    }

    pub fn velocities(&self) -> &[f64] {
        &self.v
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn domain_length(&self) -> f64 {
        self.cells as f64 * self.spacing
    }
}

/// Probability mass per cell estimated from the ensemble; sums to the total
/// particle weight.
pub fn estimate_density(
    ens: &ParticleEnsemble,
    estimator: DensityEstimator,
) -> Result<Vec<f64>, SpinZeroError> {
    let n = ens.cells;
    let a = ens.spacing;
    let mut p = vec![0.0; n];
    match estimator {
        DensityEstimator::Histogram => {
            for (&xi, &wi) in ens.x.iter().zip(&ens.w) {
                let k = (xi / a).floor() as usize % n;
                p[k] += wi;
            }
        }
        DensityEstimator::LinearCloud => {
            for (&xi, &wi) in ens.x.iter().zip(&ens.w) {
                let s = xi / a;
                let k = s.floor() as usize % n;
                let frac = s - s.floor();
                p[k] += wi * (1.0 - frac);
                p[(k + 1) % n] += wi * frac;
            }
        }
        DensityEstimator::Gaussian { bandwidth } => {
            if !(bandwidth > 0.0 && bandwidth.is_finite()) {
                return Err(SpinZeroError::BadBandwidth(bandwidth));
            }
            let length = ens.domain_length();
            for (&xi, &wi) in ens.x.iter().zip(&ens.w) {
                let kernel: Vec<f64> = (0..n)
                    .map(|k| {
                        let mut d = (xi - k as f64 * a).rem_euclid(length);
                        if d > length / 2.0 {
                            d -= length;
                        }
                        (-d * d / (2.0 * bandwidth * bandwidth)).exp()
                    })
                    .collect();
                let z: f64 = kernel.iter().sum();
                for (pk, kk) in p.iter_mut().zip(&kernel) {
                    *pk += wi * kk / z;
                }
            }
        }
    }
    Ok(p)
}

/// One F-II step: estimate the density, form the quantum potential from it,
/// kick every particle by `−∂ₓ(V + Q)·dt/m`, drift by `v·dt`, and re-estimate.
///
/// Returns the post-step density and the quantum potential that drove the
/// kick.
pub fn f2_step(
    ens: &mut ParticleEnsemble,
    potential: &[f64],
    dt: f64,
    estimator: DensityEstimator,
) -> Result<(Vec<f64>, QuantumPotentialField), SpinZeroError> {
    let n = ens.cells;
    if potential.len() != n {
        return Err(SpinZeroError::DimensionMismatch {
            left: potential.len(),
            right: n,
        });
    }
    let a = ens.spacing;
    let density = estimate_density(ens, estimator)?;
    for (&xi, &wi) in ens.x.iter().zip(&ens.w) {
        let k = (xi / a).floor() as usize % n;
        if wi > 0.0 && density[k] < EPSILON_P {
            return Err(SpinZeroError::DensityUnderflow {
                cell: k,
                value: density[k],
            });
        }
    }
    let q = quantum_potential(&density, a, ens.mass)?;
    let w: Vec<f64> = potential.iter().zip(q.values()).map(|(v, q)| v + q).collect();
    let grad: Vec<f64> = (0..n)
        .map(|k| (w[(k + 1) % n] - w[(k + n - 1) % n]) / (2.0 * a))
        .collect();

    let length = ens.domain_length();
    for (xi, vi) in ens.x.iter_mut().zip(&mut ens.v) {
        let s = *xi / a;
        let k = s.floor() as usize % n;
        let frac = s - s.floor();
        let g = grad[k] * (1.0 - frac) + grad[(k + 1) % n] * frac;
        *vi -= g * dt / ens.mass;
        *xi = (*xi + *vi * dt).rem_euclid(length);
    }
    let after = estimate_density(ens, estimator)?;
    Ok((after, q))
}
