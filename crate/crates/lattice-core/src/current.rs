use std::collections::BTreeMap;

use crate::{
    ComplexAmplitudeField, HermitianGenerator, LatticeError, PolarField, HBAR,
};

/// Antisymmetric probability current `J_nm` supported on adjacency links.
///
/// Only `n < m` values are stored; `J_mn = −J_nm` is reconstructed on read,
/// making antisymmetry exact by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentField {
    dim: usize,
    links: BTreeMap<(usize, usize), f64>,
}

impl CurrentField {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `J_nm`; zero off adjacency.
    pub fn get(&self, n: usize, m: usize) -> f64 {
        if n < m {
            self.links.get(&(n, m)).copied().unwrap_or(0.0)
        } else if n > m {
            -self.links.get(&(m, n)).copied().unwrap_or(0.0)
        } else {
            0.0
        }
    }

    /// Stored links as `(n, m, J_nm)` with `n < m`.
    pub fn links(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.links.iter().map(|(&(n, m), &j)| (n, m, j))
    }

    /// `Σ_m J_nm`, the continuity-equation rate `∂ₜP_n`.
    pub fn divergence(&self, n: usize) -> f64 {
        let mut sum = 0.0;
        for (&(a, b), &j) in &self.links {
            if a == n {
                sum += j;
            } else if b == n {
                sum -= j;
            }
        }
        sum
    }
}

/// `J_nm = (2/ħ) Im(ψ*_n H_nm ψ_m)` on every adjacency link.
pub fn current(
    psi: &ComplexAmplitudeField,
    h: &HermitianGenerator,
) -> Result<CurrentField, LatticeError> {
    if psi.dim() != h.dim() {
        return Err(LatticeError::DimensionMismatch {
            left: psi.dim(),
            right: h.dim(),
        });
    }
    let mut links = BTreeMap::new();
    for (n, m, hnm) in h.links() {
        let j = 2.0 / HBAR * (psi.amp(n).conj() * hnm * psi.amp(m)).im;
        links.insert((n, m), j);
    }
    Ok(CurrentField {
        dim: psi.dim(),
        links,
    })
}

/// Current in polar variables:
/// `J_nm = (2/ħ) R_n R_m Im(H_nm e^{−i(S_n−S_m)/ħ})`.
pub fn current_from_polar(
    p: &PolarField,
    h: &HermitianGenerator,
) -> Result<CurrentField, LatticeError> {
    if p.dim() != h.dim() {
        return Err(LatticeError::DimensionMismatch {
            left: p.dim(),
            right: h.dim(),
        });
    }
    let r = p.modulus();
    let s = p.phase();
    let mut links = BTreeMap::new();
    for (n, m, hnm) in h.links() {
        let theta = num_complex::Complex64::from_polar(1.0, -(s[n] - s[m]) / HBAR);
        let j = 2.0 / HBAR * r[n] * r[m] * (hnm * theta).im;
        links.insert((n, m), j);
    }
    Ok(CurrentField {
        dim: p.dim(),
        links,
    })
}
