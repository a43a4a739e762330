use reference_solver::{drive_trajectories, GuidedEnsemble, JumpRates};

use crate::dynamics::{StepScheme, WaveFreeSeries};
use crate::geometry::LinkGeometry;
use crate::state::WaveFreeState;
use crate::WaveFreeError;

/// A stochastic ensemble driven by the self-consistent rate field, together
/// with the deterministic `(P, T̄)` evolution that produced the rates.
#[derive(Debug)]
pub struct WaveFreeEnsemble {
    pub trajectories: Vec<reference_solver::TrajectoryRecord>,
    pub occupancy: reference_solver::OccupancySeries,
    /// Links whose sampling rate hit the `1/(10·dt)` cap, summed over steps.
    pub cap_events: usize,
    /// Deterministic state snapshots recorded on the same schedule as the
    /// occupancy samples.
    pub field: WaveFreeSeries,
}

/// Clipped rate table `T = max(0, T̄)` read off the current state. Frozen
/// links are omitted and counted as floor events.
fn rate_table(state: &WaveFreeState, geom: &LinkGeometry) -> JumpRates {
    let mut outgoing = vec![Vec::new(); geom.dim()];
    let mut floor_events = 0;
    for (idx, l) in geom.links().iter().enumerate() {
        if state.is_frozen(geom, idx) {
            floor_events += 1;
            continue;
        }
        let fwd = state.tbar(geom, l.n, l.m);
        if fwd > 0.0 {
            outgoing[l.m].push((l.n, fwd));
        }
        let bwd = state.tbar(geom, l.m, l.n);
        if bwd > 0.0 {
            outgoing[l.n].push((l.m, bwd));
        }
    }
    JumpRates::from_outgoing(outgoing, floor_events)
}

/// F-IV ensemble: evolve `(P, T̄)` deterministically, snapshot the clipped
/// rates every step, and drive `m` jump trajectories through those
/// snapshots. Initial labels are sampled from the initial `P`. Trajectory
/// `j` uses counter stream `(seed, j)`, so results do not depend on any
/// execution order.
#[allow(clippy::too_many_arguments)]
pub fn simulate_wavefree_ensemble(
    state: &mut WaveFreeState,
    geom: &LinkGeometry,
    dt: f64,
    steps: usize,
    record_every: usize,
    m: usize,
    seed: u64,
    scheme: StepScheme,
) -> Result<WaveFreeEnsemble, WaveFreeError> {
    let initial_dist = state.probabilities().to_vec();
    let mut tables = Vec::with_capacity(steps);
    let every = record_every.max(1);

    let mut field = WaveFreeSeries {
        times: Vec::new(),
        p: Vec::new(),
        tbar_fwd: Vec::new(),
        tbar_bwd: Vec::new(),
    };
    let mut record = |s: &WaveFreeState| {
        field.times.push(s.time());
        field.p.push(s.probabilities().to_vec());
        field.tbar_fwd.push(s.tbar_fwd.clone());
        field.tbar_bwd.push(s.tbar_bwd.clone());
    };
    record(state);
    for k in 1..=steps {
        tables.push(rate_table(state, geom));
        crate::dynamics::step(state, geom, dt, scheme)?;
        if k % every == 0 || k == steps {
            record(state);
        }
    }

    let GuidedEnsemble {
        trajectories,
        occupancy,
        cap_events,
    } = drive_trajectories(&tables, dt, m, every, seed, &initial_dist);
    Ok(WaveFreeEnsemble {
        trajectories,
        occupancy,
        cap_events,
        field,
    })
}
