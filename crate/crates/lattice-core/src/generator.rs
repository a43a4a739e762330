use std::collections::BTreeMap;

use crate::{LatticeError, C64};

/// Sparse Hermitian matrix `H_nm` with explicit adjacency structure.
///
/// Storage keeps only keys `(n, m)` with `n ≤ m`; the lower triangle is
/// reconstructed by conjugation, so `H_nm = conj(H_mn)` holds structurally
/// rather than by convention. Construction refuses non-Hermitian input.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianGenerator {
    dim: usize,
    entries: BTreeMap<(usize, usize), C64>,
    adjacency: Vec<Vec<usize>>,
}

impl HermitianGenerator {
    /// Build from `((n, m), H_nm)` pairs. Zero entries are dropped. When both
    /// `(n, m)` and `(m, n)` are supplied they must be exact conjugates;
    /// diagonal entries must be exactly real.
    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self, LatticeError>
    where
        I: IntoIterator<Item = ((usize, usize), C64)>,
    {
        let mut upper: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        let mut seen: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for ((n, m), v) in entries {
            if n >= dim || m >= dim {
                return Err(LatticeError::IndexOutOfBounds { n, m, dim });
            }
            if let Some(&prev) = seen.get(&(n, m)) {
                if prev != v {
                    return Err(LatticeError::NotHermitian {
                        n,
                        m,
                        forward: v,
                        backward: prev,
                    });
                }
            }
            seen.insert((n, m), v);
            if n == m {
                if v.im != 0.0 {
                    return Err(LatticeError::ComplexDiagonal(n, v.im));
                }
                if v.re != 0.0 {
                    upper.insert((n, n), v);
                }
                continue;
            }
            let (key, stored) = if n < m { ((n, m), v) } else { ((m, n), v.conj()) };
            match upper.get(&key) {
                Some(&prev) if prev != stored => {
                    return Err(LatticeError::NotHermitian {
                        n: key.0,
                        m: key.1,
                        forward: stored,
                        backward: prev.conj(),
                    });
                }
                _ => {
                    if stored != C64::new(0.0, 0.0) {
                        upper.insert(key, stored);
                    }
                }
            }
        }
        let mut adjacency = vec![Vec::new(); dim];
        for &(n, m) in upper.keys() {
            if n != m {
                adjacency[n].push(m);
                adjacency[m].push(n);
            }
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Ok(Self {
            dim,
            entries: upper,
            adjacency,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `H_nm`; zero off the stored support.
    pub fn get(&self, n: usize, m: usize) -> C64 {
        if n <= m {
            self.entries.get(&(n, m)).copied().unwrap_or_default()
        } else {
            self.entries
                .get(&(m, n))
                .map(|v| v.conj())
                .unwrap_or_default()
        }
    }

    /// Real diagonal entry `H_nn`.
    pub fn diagonal(&self, n: usize) -> f64 {
        self.get(n, n).re
    }

    /// Off-diagonal neighbors `{k : H_kn ≠ 0, k ≠ n}`, sorted.
    pub fn neighbors(&self, n: usize) -> &[usize] {
        &self.adjacency[n]
    }

    /// Off-diagonal links as `(n, m, H_nm)` with `n < m`, in key order.
    pub fn links(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.entries
            .iter()
            .filter(|((n, m), _)| n != m)
            .map(|(&(n, m), &v)| (n, m, v))
    }

    /// Matrix-vector product `(Hψ)_n`.
    pub fn apply(&self, psi: &[C64]) -> Vec<C64> {
        assert_eq!(psi.len(), self.dim);
        let mut out = vec![C64::default(); self.dim];
        for (&(n, m), &v) in &self.entries {
            if n == m {
                out[n] += v * psi[n];
            } else {
                out[n] += v * psi[m];
                out[m] += v.conj() * psi[n];
            }
        }
        out
    }

    /// Gershgorin bound on the spectral radius: `max_n Σ_m |H_nm|`.
    pub fn gershgorin_bound(&self) -> f64 {
        let mut row = vec![0.0_f64; self.dim];
        for (&(n, m), &v) in &self.entries {
            if n == m {
                row[n] += v.norm();
            } else {
                row[n] += v.norm();
                row[m] += v.norm();
            }
        }
        row.into_iter().fold(0.0, f64::max)
    }

    /// Dense row-major copy, mostly for small-system diagnostics and oracles.
    pub fn to_dense(&self) -> Vec<C64> {
        let mut out = vec![C64::default(); self.dim * self.dim];
        for n in 0..self.dim {
            for m in 0..self.dim {
                out[n * self.dim + m] = self.get(n, m);
            }
        }
        out
    }
}
