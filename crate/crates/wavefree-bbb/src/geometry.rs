use lattice_core::{HermitianGenerator, C64};

/// One off-diagonal adjacency link `(n, m)` with `n < m`, with the cached
/// quantities the rate dynamics needs.
#[derive(Debug, Clone)]
pub struct Link {
    pub n: usize,
    pub m: usize,
    /// `H_nm` as stored.
    pub h: C64,
    /// `|H_nm|`.
    pub habs: f64,
    /// Baseline sign `Sign(Re(H_nm))`; `+1` for purely imaginary entries.
    pub base_sign: f64,
}

/// Immutable link/adjacency tables derived from a generator.
#[derive(Debug, Clone)]
pub struct LinkGeometry {
    dim: usize,
    links: Vec<Link>,
    /// Per label: incident `(neighbor, link index)` pairs.
    incident: Vec<Vec<(usize, usize)>>,
    /// Real diagonal `H_nn`.
    diagonal: Vec<f64>,
    spectral_bound: f64,
}

impl LinkGeometry {
    pub fn new(h: &HermitianGenerator) -> Self {
        let dim = h.dim();
        let mut links = Vec::new();
        let mut incident = vec![Vec::new(); dim];
        for (n, m, hnm) in h.links() {
            let idx = links.len();
            links.push(Link {
                n,
                m,
                h: hnm,
                habs: hnm.norm(),
                base_sign: if hnm.re != 0.0 { hnm.re.signum() } else { 1.0 },
            });
            incident[n].push((m, idx));
            incident[m].push((n, idx));
        }
        let diagonal = (0..dim).map(|n| h.diagonal(n)).collect();
        Self {
            dim,
            links,
            incident,
            diagonal,
            spectral_bound: h.gershgorin_bound(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, idx: usize) -> &Link {
        &self.links[idx]
    }

    pub fn incident(&self, label: usize) -> &[(usize, usize)] {
        &self.incident[label]
    }

    pub fn diagonal(&self, label: usize) -> f64 {
        self.diagonal[label]
    }

    pub fn spectral_bound(&self) -> f64 {
        self.spectral_bound
    }

    pub fn link_index(&self, n: usize, m: usize) -> Option<usize> {
        self.incident[n]
            .iter()
            .find(|&&(nb, _)| nb == m)
            .map(|&(_, idx)| idx)
    }
}
