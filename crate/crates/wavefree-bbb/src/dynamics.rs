use lattice_core::HBAR;

use crate::geometry::LinkGeometry;
use crate::state::{choose_sign, CrossoverPhase, SignDecision, WaveFreeState};
use crate::{WaveFreeError, CROSSOVER_ARM_RATIO, CROSSOVER_FIRE_RATIO};

/// Update rule for one deterministic step of the `(P, T̄)` system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepScheme {
    /// First-order explicit update.
    Explicit,
    /// Second-order midpoint update; evaluates the derivative twice.
    Midpoint,
}

/// Fraction of probability a label may lose per substep.
const EXIT_GUARD: f64 = 0.05;
/// Fractional change of the rate field allowed per substep.
const RATE_GUARD: f64 = 0.1;
/// Largest per-substep motion of any link phase θ; substeps that move θ
/// faster are rejected and retried at half size.
const THETA_GUARD: f64 = 0.05;
/// Deepest allowed substep is `dt / 2^MAX_HALVINGS`.
const MAX_HALVINGS: u32 = 40;

/// Time derivatives of the stored rates, `(forward, backward)` per link.
///
/// Each directed rate obeys
/// `∂ₜT̄_nm = −½T̄_nm(Σ_k T̄_kn − Σ_k T̄_km)
///          + (2ħ²P_m)⁻¹ [H_nm]α_nm (P_n⁻¹Σ_k [H_kn]α_kn − P_m⁻¹Σ_k [H_km]α_km)`,
/// where the `[H]α` sums run over incident links and include the diagonal
/// contribution `H_kk·2P_k`. Frozen links contribute nothing and get a zero
/// derivative.
pub fn tbar_dot(
    state: &WaveFreeState,
    geom: &LinkGeometry,
) -> Result<(Vec<f64>, Vec<f64>), WaveFreeError> {
    let dim = geom.dim();
    let n_links = geom.links().len();
    let mut exit_sum = vec![0.0; dim];
    let mut halpha_sum: Vec<f64> = (0..dim)
        .map(|x| geom.diagonal(x) * 2.0 * state.p[x])
        .collect();
    let mut sha = vec![0.0; n_links];

    for (idx, l) in geom.links().iter().enumerate() {
        if state.is_frozen(geom, idx) {
            continue;
        }
        exit_sum[l.m] += state.tbar_fwd[idx];
        exit_sum[l.n] += state.tbar_bwd[idx];
        let v = state.signed_h(geom, idx) * state.alpha(geom, idx)?;
        sha[idx] = v;
        halpha_sum[l.n] += v;
        halpha_sum[l.m] += v;
    }

    let mut dfwd = vec![0.0; n_links];
    let mut dbwd = vec![0.0; n_links];
    for (idx, l) in geom.links().iter().enumerate() {
        if state.is_frozen(geom, idx) {
            continue;
        }
        let gn = halpha_sum[l.n] / state.p[l.n];
        let gm = halpha_sum[l.m] / state.p[l.m];
        let coupling = sha[idx] / (2.0 * HBAR * HBAR);
        dfwd[idx] = -0.5 * state.tbar_fwd[idx] * (exit_sum[l.n] - exit_sum[l.m])
            + coupling / state.p[l.m] * (gn - gm);
        dbwd[idx] = -0.5 * state.tbar_bwd[idx] * (exit_sum[l.m] - exit_sum[l.n])
            + coupling / state.p[l.n] * (gm - gn);
    }
    Ok((dfwd, dbwd))
}

/// `dP/dt` from the clipped rates, accumulated as pairwise-balanced link
/// transfers so that `Σ_n P_n` is conserved to machine precision.
fn probability_flux(state: &WaveFreeState, geom: &LinkGeometry) -> Vec<f64> {
    let mut dp = vec![0.0; geom.dim()];
    for (idx, l) in geom.links().iter().enumerate() {
        if state.is_frozen(geom, idx) {
            continue;
        }
        let into_n = state.tbar_fwd[idx].max(0.0) * state.p[l.m];
        let into_m = state.tbar_bwd[idx].max(0.0) * state.p[l.n];
        dp[l.n] += into_n - into_m;
        dp[l.m] += into_m - into_n;
    }
    dp
}

/// Largest total clipped exit rate over all labels.
fn max_exit_rate(state: &WaveFreeState, geom: &LinkGeometry) -> f64 {
    let mut exits = vec![0.0_f64; geom.dim()];
    for (idx, l) in geom.links().iter().enumerate() {
        if state.is_frozen(geom, idx) {
            continue;
        }
        exits[l.m] += state.tbar_fwd[idx].max(0.0);
        exits[l.n] += state.tbar_bwd[idx].max(0.0);
    }
    exits.into_iter().fold(0.0, f64::max)
}

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .chain(b.iter())
        .fold(0.0_f64, |acc, &x| acc.max(x.abs()))
}

/// Apply one raw substep of size `h` to `(P, T̄)` without any guard checks.
fn apply_substep(
    state: &mut WaveFreeState,
    geom: &LinkGeometry,
    h: f64,
    scheme: StepScheme,
) -> Result<(), WaveFreeError> {
    match scheme {
        StepScheme::Explicit => {
            let (dfwd, dbwd) = tbar_dot(state, geom)?;
            let dp = probability_flux(state, geom);
            for (p, d) in state.p.iter_mut().zip(&dp) {
                *p = (*p + h * d).max(0.0);
            }
            for idx in 0..geom.links().len() {
                state.tbar_fwd[idx] += h * dfwd[idx];
                state.tbar_bwd[idx] += h * dbwd[idx];
            }
        }
        StepScheme::Midpoint => {
            let mut mid = state.clone();
            apply_substep(&mut mid, geom, 0.5 * h, StepScheme::Explicit)?;
            project_to_manifold(&mut mid, geom);
            let (dfwd, dbwd) = tbar_dot(&mid, geom)?;
            let dp = probability_flux(&mid, geom);
            for (p, d) in state.p.iter_mut().zip(&dp) {
                *p = (*p + h * d).max(0.0);
            }
            for idx in 0..geom.links().len() {
                state.tbar_fwd[idx] += h * dfwd[idx];
                state.tbar_bwd[idx] += h * dbwd[idx];
            }
        }
    }
    Ok(())
}

/// Rescale the two rates of any link whose α-radicand went negative so the
/// state lands exactly on the `α² = 0` boundary. Returns how many links
/// needed it.
fn project_to_manifold(state: &mut WaveFreeState, geom: &LinkGeometry) -> u64 {
    let mut events = 0;
    for (idx, l) in geom.links().iter().enumerate() {
        if state.is_frozen(geom, idx) {
            continue;
        }
        if state.radicand(geom, idx) < 0.0 {
            let j = state.current(geom, idx);
            if j != 0.0 {
                let f = 2.0 * (state.p[l.n] * state.p[l.m]).sqrt() * l.habs / (HBAR * j.abs());
                state.tbar_fwd[idx] *= f;
                state.tbar_bwd[idx] *= f;
                events += 1;
            }
        }
    }
    events
}

/// Refresh the sign registers and θ history after a completed substep.
///
/// Two complementary detectors drive the register. Away from the crossover
/// point, a flip is accepted only when the flipped θ is closer to a linear
/// extrapolation of the θ history (a transversal zero of the radicand that
/// fell between two substeps). Inside the crossover band (`|Re θ|` below
/// [`CROSSOVER_FIRE_RATIO`]) the two candidates nearly coincide and
/// extrapolation cannot decide, so the register toggles once per passage at
/// the closest approach of `|Re θ|` to zero; the hysteresis against
/// [`CROSSOVER_ARM_RATIO`] makes it exactly once.
fn update_crossovers(state: &mut WaveFreeState, geom: &LinkGeometry) -> f64 {
    let mut max_step = 0.0_f64;
    for idx in 0..geom.links().len() {
        if state.is_frozen(geom, idx) {
            continue;
        }
        let theta_keep = match state.theta(geom, idx) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let theta_flip = {
            state.sign[idx] = -state.sign[idx];
            let v = state.theta(geom, idx).expect("α already validated");
            state.sign[idx] = -state.sign[idx];
            v
        };
        let ratio = theta_keep.re.abs();
        let mut flip = false;
        match state.crossover[idx] {
            CrossoverPhase::Armed => {
                if ratio < CROSSOVER_FIRE_RATIO {
                    state.crossover[idx] = CrossoverPhase::InBand { min_ratio: ratio };
                } else {
                    let theta_pred = 2.0 * state.theta_prev[idx] - state.theta_prev2[idx];
                    flip =
                        choose_sign(theta_pred, theta_keep, theta_flip) == SignDecision::Flip;
                }
            }
            CrossoverPhase::InBand { min_ratio } => {
                if ratio > min_ratio {
                    flip = true;
                    state.crossover[idx] = CrossoverPhase::Disarmed;
                } else {
                    state.crossover[idx] = CrossoverPhase::InBand { min_ratio: ratio };
                }
            }
            CrossoverPhase::Disarmed => {
                if ratio > CROSSOVER_ARM_RATIO {
                    state.crossover[idx] = CrossoverPhase::Armed;
                }
            }
        }
        let theta_new = if flip {
            state.sign[idx] = -state.sign[idx];
            state.diagnostics.sign_flips += 1;
            state.diagnostics.flip_times.push(state.t);
            theta_flip
        } else {
            theta_keep
        };
        let step_size = (theta_new - state.theta_prev[idx]).norm();
        max_step = max_step.max(step_size);
        if step_size > state.diagnostics.max_theta_step {
            state.diagnostics.max_theta_step = step_size;
        }
        state.theta_prev2[idx] = state.theta_prev[idx];
        state.theta_prev[idx] = theta_new;
    }
    max_step
}

/// Advance the state by one nominal step `dt`, internally subdividing
/// whenever either stability guard would be violated: a label may lose at
/// most [`EXIT_GUARD`] of its probability per substep, and the rate field
/// may change by at most [`RATE_GUARD`] of its current scale.
pub fn step(
    state: &mut WaveFreeState,
    geom: &LinkGeometry,
    dt: f64,
    scheme: StepScheme,
) -> Result<(), WaveFreeError> {
    if !(dt > 0.0) {
        return Err(WaveFreeError::IntegrationFailure {
            t: state.t,
            detail: format!("nonpositive step size {dt}"),
        });
    }
    let t_end = state.t + dt;
    let rate_floor = geom.spectral_bound() / HBAR;
    while state.t < t_end - 1e-15 * dt.max(t_end.abs()) {
        let remaining = t_end - state.t;
        let (dfwd, dbwd) = tbar_dot(state, geom)?;
        let dot_scale = max_abs(&dfwd, &dbwd);
        let tbar_scale = max_abs(&state.tbar_fwd, &state.tbar_bwd).max(rate_floor);
        let exit = max_exit_rate(state, geom);

        let mut h = remaining;
        let mut halvings = 0;
        while h * exit > EXIT_GUARD || h * dot_scale > RATE_GUARD * tbar_scale {
            h *= 0.5;
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(WaveFreeError::StepSizeFailure {
                    t: state.t,
                    max_halvings: MAX_HALVINGS,
                });
            }
        }

        let frozen_before = (0..geom.links().len()).any(|idx| state.is_frozen(geom, idx));
        loop {
            let snapshot = state.clone();
            apply_substep(state, geom, h, scheme)?;
            state.t += h;
            let projected = project_to_manifold(state, geom);
            state.diagnostics.projection_events += projected;
            if frozen_before {
                state.diagnostics.frozen_events += 1;
            }
            let theta_motion = update_crossovers(state, geom);
            if theta_motion > THETA_GUARD && halvings < MAX_HALVINGS {
                *state = snapshot;
                h *= 0.5;
                halvings += 1;
                continue;
            }
            break;
        }
        for &p in &state.p {
            if !p.is_finite() {
                return Err(WaveFreeError::IntegrationFailure {
                    t: state.t,
                    detail: "probability became non-finite".into(),
                });
            }
        }
    }
    state.t = t_end;
    Ok(())
}

/// Recorded snapshots of a deterministic `(P, T̄)` evolution.
#[derive(Debug, Clone)]
pub struct WaveFreeSeries {
    pub times: Vec<f64>,
    /// Probability vector at each recorded time.
    pub p: Vec<Vec<f64>>,
    /// Forward link rates `T̄_nm` (n < m) at each recorded time.
    pub tbar_fwd: Vec<Vec<f64>>,
    /// Backward link rates `T̄_mn` at each recorded time.
    pub tbar_bwd: Vec<Vec<f64>>,
}

/// Run `steps` nominal steps of size `dt`, recording a snapshot at t = 0 and
/// then after every `record_every` steps (the final state is always
/// recorded). The state is left at the final time.
pub fn evolve_wavefree(
    state: &mut WaveFreeState,
    geom: &LinkGeometry,
    dt: f64,
    steps: usize,
    record_every: usize,
    scheme: StepScheme,
) -> Result<WaveFreeSeries, WaveFreeError> {
    let every = record_every.max(1);
    let mut series = WaveFreeSeries {
        times: Vec::new(),
        p: Vec::new(),
        tbar_fwd: Vec::new(),
        tbar_bwd: Vec::new(),
    };
    let mut record = |s: &WaveFreeState| {
        series.times.push(s.t);
        series.p.push(s.p.clone());
        series.tbar_fwd.push(s.tbar_fwd.clone());
        series.tbar_bwd.push(s.tbar_bwd.clone());
    };
    record(state);
    for k in 1..=steps {
        step(state, geom, dt, scheme)?;
        if k % every == 0 || k == steps {
            record(state);
        }
    }
    Ok(series)
}
