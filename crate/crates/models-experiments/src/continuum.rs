use lattice_core::{PolarField, HBAR};
use spinzero_formulations::quantum_potential;
use wavefree_bbb::{init_from_polar, tbar_dot, LinkGeometry, WaveFreeState};

use crate::models::build_circle;
use crate::ModelError;

/// Right-moving Gaussian packet on a ring of fixed physical length.
///
/// The modulus is a periodized Gaussian of width `width` centered at
/// `center`; the phase is linear with `momentum_quanta` circulation quanta,
/// so the momentum is `2πħq/length` and the phase closes around the ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    pub length: f64,
    pub center: f64,
    pub width: f64,
    pub momentum_quanta: i64,
    pub mass: f64,
}

/// Discretization-error measurements of the ring velocity law at a sequence
/// of grid spacings.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumReport {
    pub spacings: Vec<f64>,
    /// `E(a) = max_n |a·∂ₜT̄_{n+1,n} + D(V + Q)_n / M|` per spacing.
    pub errors: Vec<f64>,
    /// `E(a) / E(a/2)` per consecutive pair.
    pub ratios: Vec<f64>,
}

/// Number of periodic images summed when sampling the packet modulus.
const PACKET_IMAGES: i64 = 3;

/// Cell probabilities and phases of the packet on an `n`-cell grid.
fn packet_polar(spec: &PacketSpec, cells: usize) -> Result<PolarField, ModelError> {
    let a = spec.length / cells as f64;
    let momentum = 2.0 * std::f64::consts::PI * HBAR * spec.momentum_quanta as f64 / spec.length;
    let mut p: Vec<f64> = (0..cells)
        .map(|k| {
            let x = k as f64 * a;
            (-PACKET_IMAGES..=PACKET_IMAGES)
                .map(|j| {
                    let d = x - spec.center + j as f64 * spec.length;
                    (-d * d / (2.0 * spec.width * spec.width)).exp()
                })
                .sum::<f64>()
        })
        .collect();
    let total: f64 = p.iter().sum();
    for pk in &mut p {
        *pk /= total;
    }
    let modulus = p.iter().map(|&pk| pk.sqrt()).collect();
    let phase = (0..cells).map(|k| momentum * k as f64 * a).collect();
    Ok(PolarField::new(modulus, phase)?)
}

/// Directed rate `T̄_{n+1,n}` and its time derivative on the ring link out of
/// cell `n`, with the wrap link `(N−1, 0)` handled by its stored orientation.
fn rightward_rate(
    state: &WaveFreeState,
    geom: &LinkGeometry,
    dfwd: &[f64],
    dbwd: &[f64],
    n: usize,
) -> (f64, f64) {
    let cells = geom.dim();
    let next = (n + 1) % cells;
    let idx = geom
        .link_index(n.min(next), n.max(next))
        .expect("ring adjacency");
    if n < next {
        (state.tbar(geom, next, n), dbwd[idx])
    } else {
        (state.tbar(geom, next, n), dfwd[idx])
    }
}

/// Measure how fast `a·∂ₜT̄_{n+1,n}` approaches the force `−D(V + Q)_n/M` as
/// the grid is refined at fixed physical length.
///
/// Everything is evaluated at `t = 0` from the analytic initial fields, so
/// the reported error is pure discretization error with no time-integration
/// contribution. The state must be right-moving (`J_{n+1,n} ≥ 0` on every
/// link) for `v_n = a·T̄_{n+1,n}` to be the velocity of the cell-`n`
/// trajectory.
pub fn continuum_limit_experiment(
    cells_list: &[usize],
    spec: &PacketSpec,
) -> Result<ContinuumReport, ModelError> {
    if !(spec.length > 0.0 && spec.width > 0.0) {
        return Err(ModelError::BadSpacing(spec.length.min(spec.width)));
    }
    let mut spacings = Vec::with_capacity(cells_list.len());
    let mut errors = Vec::with_capacity(cells_list.len());

    for &cells in cells_list {
        let a = spec.length / cells as f64;
        let potential = vec![0.0; cells];
        let h = build_circle(cells, a, spec.mass, &potential)?;
        let geom = LinkGeometry::new(&h);
        let polar = packet_polar(spec, cells)?;
        let state = init_from_polar(&polar, &geom)?;

        for n in 0..cells {
            let next = (n + 1) % cells;
            let rate = state.tbar(&geom, next, n);
            let current = rate * state.probabilities()[n];
            if current < 0.0 {
                return Err(ModelError::NotRightMoving { n, current });
            }
        }

        let (dfwd, dbwd) = tbar_dot(&state, &geom)?;
        let q = quantum_potential(state.probabilities(), a, spec.mass)?;
        let force: Vec<f64> = (0..cells)
            .map(|n| {
                let vq_next = potential[(n + 1) % cells] + q.values()[(n + 1) % cells];
                let vq_prev = potential[(n + cells - 1) % cells] + q.values()[(n + cells - 1) % cells];
                -(vq_next - vq_prev) / (2.0 * a * spec.mass)
            })
            .collect();

        let mut worst = 0.0_f64;
        for n in 0..cells {
            let (_, rate_dot) = rightward_rate(&state, &geom, &dfwd, &dbwd, n);
            worst = worst.max((a * rate_dot - force[n]).abs());
        }
        spacings.push(a);
        errors.push(worst);
    }

    let ratios = errors.windows(2).map(|w| w[0] / w[1]).collect();
    Ok(ContinuumReport {
        spacings,
        errors,
        ratios,
    })
}
