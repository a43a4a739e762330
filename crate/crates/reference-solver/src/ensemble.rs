use lattice_core::rng::CounterRng;
use lattice_core::{probability, ComplexAmplitudeField};

use crate::jumps::{bell_rates, jump_step_capped, JumpRates, SAMPLING_CAP_FACTOR};
use crate::{SolverError, UnitaryIntegrator};

/// One stochastic realization: the label as a piecewise-constant function of
/// time, stored as the initial sample plus every change point.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    /// RNG stream id (the trajectory index within its ensemble).
    pub stream: u64,
    /// `(t, label)` with strictly increasing times.
    pub samples: Vec<(f64, usize)>,
}

impl TrajectoryRecord {
    pub fn label_at_end(&self) -> usize {
        self.samples.last().expect("non-empty record").1
    }
}

/// Empirical occupancy `P̂_n(t)` on a uniform grid of sample times.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancySeries {
    pub times: Vec<f64>,
    /// `occupancy[i][n]` is the fraction of trajectories at label `n` at
    /// `times[i]`.
    pub occupancy: Vec<Vec<f64>>,
}

impl OccupancySeries {
    pub fn sup_distance(&self, reference: &[Vec<f64>]) -> f64 {
        assert_eq!(self.occupancy.len(), reference.len());
        let mut worst = 0.0_f64;
        for (emp, exact) in self.occupancy.iter().zip(reference) {
            for (a, b) in emp.iter().zip(exact) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    }
}

#[derive(Debug)]
pub struct GuidedEnsemble {
    pub trajectories: Vec<TrajectoryRecord>,
    pub occupancy: OccupancySeries,
    /// Links whose sampling rate hit the `1/(10·dt)` cap, summed over steps.
    pub cap_events: usize,
}

/// Drive `m` independent trajectories through a precomputed sequence of rate
/// snapshots (one per step). Trajectory `j` consumes stream `(seed, j)`:
/// one variate for the initial label, one per step thereafter, so results
/// are independent of any execution order.
pub fn drive_trajectories(
    rate_tables: &[JumpRates],
    dt: f64,
    m: usize,
    record_every: usize,
    seed: u64,
    initial_dist: &[f64],
) -> GuidedEnsemble {
    assert!(record_every > 0);
    let steps = rate_tables.len();
    let dim = initial_dist.len();
    let cap = 1.0 / (SAMPLING_CAP_FACTOR * dt);
    let mut cap_events = 0;
    let capped: Vec<JumpRates> = rate_tables
        .iter()
        .map(|r| {
            let (c, e) = r.capped(cap);
            cap_events += e;
            c
        })
        .collect();

    let n_samples = steps / record_every + 1;
    let mut counts = vec![vec![0u64; dim]; n_samples];
    let mut trajectories = Vec::with_capacity(m);
    for j in 0..m {
        let mut rng = CounterRng::new(seed, j as u64);
        let mut label = sample_categorical(initial_dist, rng.next_f64());
        let mut samples = vec![(0.0, label)];
        counts[0][label] += 1;
        for (step, table) in capped.iter().enumerate() {
            let next = jump_step_capped(label, table, dt, &mut rng);
            if next != label {
                label = next;
                samples.push(((step + 1) as f64 * dt, label));
            }
            if (step + 1) % record_every == 0 {
                counts[(step + 1) / record_every][label] += 1;
            }
        }
        trajectories.push(TrajectoryRecord {
            stream: j as u64,
            samples,
        });
    }

    let times = (0..n_samples)
        .map(|i| (i * record_every) as f64 * dt)
        .collect();
    let occupancy = counts
        .into_iter()
        .map(|row| row.into_iter().map(|c| c as f64 / m as f64).collect())
        .collect();
    GuidedEnsemble {
        trajectories,
        occupancy: OccupancySeries { times, occupancy },
        cap_events,
    }
}

/// F-I guided ensemble: integrate the wave function, read Bell rates off each
/// step, and drive jump trajectories from those snapshots. Initial labels are
/// sampled from `initial_dist` when given, else from `|ψ₀|²`.
pub fn simulate_guided_ensemble(
    psi0: &ComplexAmplitudeField,
    integ: &UnitaryIntegrator,
    m: usize,
    steps: usize,
    record_every: usize,
    seed: u64,
    initial_dist: Option<&[f64]>,
) -> Result<GuidedEnsemble, SolverError> {
    let series = integ.evolve(psi0, steps)?;
    let mut tables = Vec::with_capacity(steps);
    for psi in &series[..steps] {
        tables.push(bell_rates(psi, integ.generator())?);
    }
    let default_dist;
    let dist = match initial_dist {
        Some(d) => d,
        None => {
            default_dist = probability(psi0).values().to_vec();
            &default_dist
        }
    };
    Ok(drive_trajectories(
        &tables,
        integ.dt(),
        m,
        record_every,
        seed,
        dist,
    ))
}

fn sample_categorical(weights: &[f64], u: f64) -> usize {
    let total: f64 = weights.iter().sum();
    let mut acc = 0.0;
    let target = u * total;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    weights.len() - 1
}
