use lattice_core::rng::CounterRng;
use lattice_core::{current, probability, ComplexAmplitudeField, HermitianGenerator};

use crate::SolverError;

/// Probability floor: rates into or out of labels with `P` below this are
/// set to zero and counted as floor events.
pub const EPSILON_P: f64 = 1e-12;

/// For ensemble sampling, a link rate is capped at `1/(CAP·dt)`; the
/// generalized rates genuinely diverge where `P → 0` while the physical flux
/// stays finite.
pub const SAMPLING_CAP_FACTOR: f64 = 10.0;

/// Bell jump rates `T_nm = max(0, J_nm/P_m)` (the rate of `m → n` jumps),
/// stored as outgoing lists per source label.
#[derive(Debug, Clone)]
pub struct JumpRates {
    outgoing: Vec<Vec<(usize, f64)>>,
    floor_events: usize,
}

impl JumpRates {
    /// Build a table directly from per-source outgoing `(target, rate)`
    /// lists, for rate fields produced by something other than a wave
    /// function. Rates must be nonnegative and finite.
    pub fn from_outgoing(outgoing: Vec<Vec<(usize, f64)>>, floor_events: usize) -> Self {
        debug_assert!(outgoing
            .iter()
            .flatten()
            .all(|&(_, r)| r.is_finite() && r >= 0.0));
        Self {
            outgoing,
            floor_events,
        }
    }

    pub fn dim(&self) -> usize {
        self.outgoing.len()
    }

    /// `T_nm`, the rate of jumping from `m` to `n`.
    pub fn get(&self, n: usize, m: usize) -> f64 {
        self.outgoing[m]
            .iter()
            .find(|&&(target, _)| target == n)
            .map_or(0.0, |&(_, r)| r)
    }

    /// Outgoing `(target, rate)` pairs from `m`.
    pub fn outgoing(&self, m: usize) -> &[(usize, f64)] {
        &self.outgoing[m]
    }

    /// Total exit rate `Σ_k T_km` from `m`.
    pub fn exit_rate(&self, m: usize) -> f64 {
        self.outgoing[m].iter().map(|&(_, r)| r).sum()
    }

    /// Links where `P` fell below [`EPSILON_P`] and the rate was zeroed.
    pub fn floor_events(&self) -> usize {
        self.floor_events
    }

    /// Copy with each rate capped at `cap`; returns the number of capped links.
    pub fn capped(&self, cap: f64) -> (Self, usize) {
        let mut events = 0;
        let outgoing = self
            .outgoing
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(t, r)| {
                        if r > cap {
                            events += 1;
                            (t, cap)
                        } else {
                            (t, r)
                        }
                    })
                    .collect()
            })
            .collect();
        (
            Self {
                outgoing,
                floor_events: self.floor_events,
            },
            events,
        )
    }
}

/// Rates from the wave function: `T_nm = max(0, J_nm/P_m)` on adjacency links.
pub fn bell_rates(
    psi: &ComplexAmplitudeField,
    h: &HermitianGenerator,
) -> Result<JumpRates, SolverError> {
    let j = current(psi, h)?;
    let p = probability(psi);
    let mut outgoing = vec![Vec::new(); psi.dim()];
    let mut floor_events = 0;
    for (n, m, jnm) in j.links() {
        // J_nm > 0 drives m → n; J_nm < 0 drives n → m.
        if jnm > 0.0 {
            if p.get(m) >= EPSILON_P {
                outgoing[m].push((n, jnm / p.get(m)));
            } else {
                floor_events += 1;
            }
        } else if jnm < 0.0 {
            if p.get(n) >= EPSILON_P {
                outgoing[n].push((m, -jnm / p.get(n)));
            } else {
                floor_events += 1;
            }
        }
    }
    Ok(JumpRates {
        outgoing,
        floor_events,
    })
}

/// One first-order jump decision: from `n`, jump to `k` with probability
/// `T_kn·dt`, else stay. Consumes exactly one uniform variate.
pub fn jump_step(
    n: usize,
    rates: &JumpRates,
    dt: f64,
    rng: &mut CounterRng,
) -> Result<usize, SolverError> {
    let total = rates.exit_rate(n);
    let product = total * dt;
    if product > 0.1 {
        return Err(SolverError::RateOverflow {
            label: n,
            total_rate: total,
            product,
            required_dt: 0.1 / total,
        });
    }
    let u = rng.next_f64();
    let mut acc = 0.0;
    for &(target, rate) in rates.outgoing(n) {
        acc += rate * dt;
        if u < acc {
            return Ok(target);
        }
    }
    Ok(n)
}

/// Like [`jump_step`] but with per-link capped probabilities instead of the
/// hard guard; used by ensemble drivers near rate spikes. Still one variate.
pub(crate) fn jump_step_capped(n: usize, rates: &JumpRates, dt: f64, rng: &mut CounterRng) -> usize {
    let u = rng.next_f64();
    let mut acc = 0.0;
    for &(target, rate) in rates.outgoing(n) {
        acc += rate * dt;
        if u < acc {
            return target;
        }
    }
    n
}
