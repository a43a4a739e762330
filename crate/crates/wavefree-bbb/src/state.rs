use lattice_core::{PolarField, C64, HBAR};

use crate::geometry::LinkGeometry;
use crate::{WaveFreeError, CROSSOVER_FIRE_RATIO, EPSILON_P, RADICAND_TOL};

/// Per-link crossover detector state.
///
/// A passage through the crossover point (`α/(2R_nR_m) → 0`) must toggle the
/// sign register exactly once, at the closest approach; the hysteresis
/// between the fire and re-arm thresholds guarantees the "exactly once".
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum CrossoverPhase {
    /// Watching for `|Re θ|` to drop below the fire threshold.
    Armed,
    /// Inside the crossover band, tracking the running minimum of `|Re θ|`.
    InBand { min_ratio: f64 },
    /// Fired; waiting for `|Re θ|` to recover above the arm threshold.
    Disarmed,
}

/// Running diagnostics accumulated over an evolution.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WaveFreeDiagnostics {
    /// Crossover sign flips, with the times at which they happened.
    pub sign_flips: u64,
    pub flip_times: Vec<f64>,
    /// Largest step-to-step `|Δθ|` observed on any link.
    pub max_theta_step: f64,
    /// Steps on which a link was projected back onto the `α² ≥ 0` manifold.
    pub projection_events: u64,
    /// Substeps on which some link was frozen by the probability floor.
    pub frozen_events: u64,
}

/// The wave-function-free state `(P_n, T̄_nm, signs, t)`.
///
/// Rates are stored per undirected link `(n, m)` with `n < m`:
/// `tbar_fwd = T̄_nm` (the generalized rate of `m → n` jumps) and
/// `tbar_bwd = T̄_mn`. The crossover register `sign` multiplies the baseline
/// sign convention `Sign(Re H_nm)` inside every `[H]` factor. The previous
/// two link phases are carried along so crossover decisions can extrapolate
/// θ forward in time.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFreeState {
    pub(crate) p: Vec<f64>,
    pub(crate) tbar_fwd: Vec<f64>,
    pub(crate) tbar_bwd: Vec<f64>,
    pub(crate) sign: Vec<f64>,
    pub(crate) theta_prev: Vec<C64>,
    pub(crate) theta_prev2: Vec<C64>,
    pub(crate) crossover: Vec<CrossoverPhase>,
    pub(crate) t: f64,
    pub(crate) diagnostics: WaveFreeDiagnostics,
}

impl WaveFreeState {
    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn diagnostics(&self) -> &WaveFreeDiagnostics {
        &self.diagnostics
    }

    /// Generalized rate `T̄_nm` (the rate driving `m → n` jumps); zero off
    /// adjacency.
    pub fn tbar(&self, geom: &LinkGeometry, n: usize, m: usize) -> f64 {
        match geom.link_index(n.min(m), n.max(m)) {
            Some(idx) => {
                if n < m {
                    self.tbar_fwd[idx]
                } else {
                    self.tbar_bwd[idx]
                }
            }
            None => 0.0,
        }
    }

    /// Crossover register of a link.
    pub fn link_sign(&self, idx: usize) -> f64 {
        self.sign[idx]
    }

    /// Is the link currently frozen by the probability floor?
    pub fn is_frozen(&self, geom: &LinkGeometry, idx: usize) -> bool {
        let l = geom.link(idx);
        self.p[l.n] < EPSILON_P || self.p[l.m] < EPSILON_P
    }

    /// Underlying link current `J_nm`, symmetrized over the two stored rates:
    /// `J_nm = T̄_nm P_m = −T̄_mn P_n` when the state is exactly consistent.
    pub fn current(&self, geom: &LinkGeometry, idx: usize) -> f64 {
        let l = geom.link(idx);
        0.5 * (self.tbar_fwd[idx] * self.p[l.m] - self.tbar_bwd[idx] * self.p[l.n])
    }

    /// Worst relative antisymmetry defect of `J_nm = −J_mn` over all active
    /// links.
    pub fn current_consistency_defect(&self, geom: &LinkGeometry) -> f64 {
        let mut worst = 0.0_f64;
        for (idx, l) in geom.links().iter().enumerate() {
            if self.is_frozen(geom, idx) {
                continue;
            }
            let fwd = self.tbar_fwd[idx] * self.p[l.m];
            let bwd = self.tbar_bwd[idx] * self.p[l.n];
            let scale = fwd.abs().max(bwd.abs()).max(1e-300);
            worst = worst.max((fwd + bwd).abs() / scale);
        }
        worst
    }

    /// The α-radicand `4P_nP_m − ħ²J²_nm/|H_nm|²`.
    pub fn radicand(&self, geom: &LinkGeometry, idx: usize) -> f64 {
        let l = geom.link(idx);
        let j = self.current(geom, idx);
        4.0 * self.p[l.n] * self.p[l.m] - HBAR * HBAR * j * j / (l.habs * l.habs)
    }

    /// `α_nm = (4P_nP_m − ħ²J²/|H|²)^{1/2}`, clamped to zero within
    /// [`RADICAND_TOL`] of the boundary.
    pub fn alpha(&self, geom: &LinkGeometry, idx: usize) -> Result<f64, WaveFreeError> {
        let rad = self.radicand(geom, idx);
        if rad < -RADICAND_TOL {
            let l = geom.link(idx);
            return Err(WaveFreeError::ConsistencyViolation {
                n: l.n,
                m: l.m,
                radicand: rad,
            });
        }
        Ok(rad.max(0.0).sqrt())
    }

    /// Signed matrix element `[H_nm] = sign·Sign(Re H_nm)·|H_nm|` including
    /// the crossover register.
    pub fn signed_h(&self, geom: &LinkGeometry, idx: usize) -> f64 {
        let l = geom.link(idx);
        self.sign[idx] * l.base_sign * l.habs
    }

    /// Link phase `θ_nm = ([H_nm]α_nm + iħJ_nm)/(2R_mR_nH_nm)`.
    pub fn theta(&self, geom: &LinkGeometry, idx: usize) -> Result<C64, WaveFreeError> {
        let l = geom.link(idx);
        if self.p[l.n] < EPSILON_P || self.p[l.m] < EPSILON_P {
            return Err(WaveFreeError::UndefinedLink { n: l.n, m: l.m });
        }
        let alpha = self.alpha(geom, idx)?;
        let j = self.current(geom, idx);
        let numerator = C64::new(self.signed_h(geom, idx) * alpha, HBAR * j);
        let denom = 2.0 * (self.p[l.n] * self.p[l.m]).sqrt() * l.h;
        Ok(numerator / denom)
    }
}

/// Outcome of a crossover decision on one link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignDecision {
    Keep,
    Flip,
}

/// Pick the sign register that keeps θ continuous: flip only when the
/// flipped candidate is strictly closer to the extrapolated θ. Ties keep.
pub fn choose_sign(theta_pred: C64, theta_keep: C64, theta_flip: C64) -> SignDecision {
    if (theta_flip - theta_pred).norm() < (theta_keep - theta_pred).norm() {
        SignDecision::Flip
    } else {
        SignDecision::Keep
    }
}

/// Build a wave-free state from chosen initial moduli and phases.
///
/// The rates come out of the polar-form current, so every consistency
/// condition holds by construction; the sign registers are set so that the
/// reconstructed θ matches the supplied phases exactly, which makes the
/// phase round-trip an identity rather than an approximation.
pub fn init_from_polar(
    polar: &PolarField,
    geom: &LinkGeometry,
) -> Result<WaveFreeState, WaveFreeError> {
    if polar.dim() != geom.dim() {
        return Err(WaveFreeError::DimensionMismatch {
            left: polar.dim(),
            right: geom.dim(),
        });
    }
    let r = polar.modulus();
    let s = polar.phase();
    let p: Vec<f64> = r.iter().map(|&x| x * x).collect();

    let n_links = geom.links().len();
    let mut tbar_fwd = vec![0.0; n_links];
    let mut tbar_bwd = vec![0.0; n_links];
    let mut sign = vec![1.0; n_links];
    let mut theta0 = vec![C64::new(1.0, 0.0); n_links];

    for (idx, l) in geom.links().iter().enumerate() {
        if p[l.n] < EPSILON_P || p[l.m] < EPSILON_P {
            // Frozen link: rates held at zero until P recovers.
            continue;
        }
        let theta_actual = C64::from_polar(1.0, -(s[l.n] - s[l.m]) / HBAR);
        let j = 2.0 / HBAR * r[l.n] * r[l.m] * (l.h * theta_actual).im;
        tbar_fwd[idx] = j / p[l.m];
        tbar_bwd[idx] = -j / p[l.n];

        let rad = 4.0 * p[l.n] * p[l.m] - HBAR * HBAR * j * j / (l.habs * l.habs);
        let alpha = rad.max(0.0).sqrt();
        let denom = 2.0 * r[l.n] * r[l.m] * l.h;
        let keep = C64::new(l.base_sign * l.habs * alpha, HBAR * j) / denom;
        let flip = C64::new(-l.base_sign * l.habs * alpha, HBAR * j) / denom;
        if choose_sign(theta_actual, keep, flip) == SignDecision::Flip {
            sign[idx] = -1.0;
            theta0[idx] = flip;
        } else {
            theta0[idx] = keep;
        }
    }

    let crossover = theta0
        .iter()
        .map(|th| {
            let ratio = th.re.abs();
            if ratio < CROSSOVER_FIRE_RATIO {
                CrossoverPhase::InBand { min_ratio: ratio }
            } else {
                CrossoverPhase::Armed
            }
        })
        .collect();
    Ok(WaveFreeState {
        p,
        tbar_fwd,
        tbar_bwd,
        sign,
        theta_prev: theta0.clone(),
        theta_prev2: theta0,
        crossover,
        t: 0.0,
        diagnostics: WaveFreeDiagnostics::default(),
    })
}

/// Recover the phases `S_n` (up to one global constant) by accumulating
/// `−ħ·arg(θ)` over a spanning tree of the active adjacency graph, then
/// checking the closure defect on every non-tree link.
pub fn reconstruct_phases(
    state: &WaveFreeState,
    geom: &LinkGeometry,
) -> Result<PolarField, WaveFreeError> {
    let dim = geom.dim();
    let mut s = vec![0.0_f64; dim];
    let mut visited = vec![false; dim];

    let active = |idx: usize| !state.is_frozen(geom, idx);
    let root = (0..dim)
        .find(|&n| state.p[n] >= EPSILON_P)
        .ok_or(WaveFreeError::NotConnected(0))?;
    let mut queue = std::collections::VecDeque::from([root]);
    visited[root] = true;
    let mut tree_links = vec![false; geom.links().len()];
    while let Some(n) = queue.pop_front() {
        for &(nb, idx) in geom.incident(n) {
            if visited[nb] || !active(idx) {
                continue;
            }
            let theta = state.theta(geom, idx)?;
            let l = geom.link(idx);
            // θ_nm = e^{−i(S_n − S_m)/ħ} gives delta = S_n − S_m.
            let delta = -HBAR * theta.arg();
            if l.n == n {
                s[nb] = s[n] - delta;
            } else {
                s[nb] = s[n] + delta;
            }
            visited[nb] = true;
            tree_links[idx] = true;
            queue.push_back(nb);
        }
    }
    for n in 0..dim {
        if !visited[n] && state.p[n] >= EPSILON_P {
            return Err(WaveFreeError::NotConnected(n));
        }
    }

    let tol = 1e-6;
    for (idx, l) in geom.links().iter().enumerate() {
        if tree_links[idx] || !active(idx) {
            continue;
        }
        let theta = state.theta(geom, idx)?;
        let delta = -HBAR * theta.arg(); // S_n − S_m implied by this link
        let defect = wrap_phase(s[l.n] - s[l.m] - delta);
        if defect.abs() > tol {
            return Err(WaveFreeError::LoopClosure {
                n: l.n,
                m: l.m,
                defect: defect.abs(),
                tol,
            });
        }
    }

    let modulus = state.p.iter().map(|&x| x.sqrt()).collect();
    Ok(PolarField::new(modulus, s)?)
}

/// Wrap an action-valued phase difference into `(−πħ, πħ]`.
fn wrap_phase(x: f64) -> f64 {
    let tau = 2.0 * std::f64::consts::PI * HBAR;
    let mut y = x % tau;
    if y > std::f64::consts::PI * HBAR {
        y -= tau;
    } else if y <= -std::f64::consts::PI * HBAR {
        y += tau;
    }
    y
}
