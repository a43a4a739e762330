use std::collections::BTreeMap;

use lattice_core::rng::CounterRng;
use lattice_core::{polar_compose, polar_decompose, PolarField, HBAR};
use models_experiments::{build_circle, build_particle_spin, build_spin_half, CircleModel, SpinHalfModel};
use reference_solver::{simulate_guided_ensemble, IntegrationScheme, UnitaryIntegrator};
use spinzero_formulations::{
    f1_velocity_field, f2_step, f3_step, DensityEstimator, GridField, ParticleEnsemble,
};
use wavefree_bbb::{evolve_wavefree, init_from_polar, LinkGeometry, StepScheme};

use crate::config::{Formulation, InitialStateSpec, ModelSpec, RunConfig, WavefreeScheme};
use crate::error::integration;
use crate::output::Row;
use crate::CliError;

/// Everything a run produces before it is written to disk.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub rows: Vec<Row>,
    pub diagnostics: BTreeMap<String, f64>,
}

/// Largest dimension for which the reference integrator uses the spectral
/// propagator; beyond it the implicit midpoint rule takes over.
const SPECTRAL_DIM_LIMIT: usize = 4096;

/// Periodic images summed when sampling a Gaussian packet on the ring.
const PACKET_IMAGES: i64 = 3;

fn circle_parts(model: &ModelSpec) -> Option<(usize, f64, f64, Vec<f64>)> {
    match model {
        ModelSpec::Circle {
            cells,
            spacing,
            mass,
            potential,
        }
        | ModelSpec::ParticleSpin {
            cells,
            spacing,
            mass,
            potential,
            ..
        } => Some((
            *cells,
            *spacing,
            *mass,
            potential.clone().unwrap_or_else(|| vec![0.0; *cells]),
        )),
        ModelSpec::SpinHalf { .. } => None,
    }
}

fn build_generator(model: &ModelSpec) -> Result<lattice_core::HermitianGenerator, CliError> {
    match model {
        ModelSpec::Circle { .. } => {
            let (cells, spacing, mass, potential) = circle_parts(model).unwrap();
            build_circle(cells, spacing, mass, &potential).map_err(integration)
        }
        ModelSpec::SpinHalf { mu, b } => build_spin_half(*mu, *b).map_err(integration),
        ModelSpec::ParticleSpin { mu, b, .. } => {
            let (cells, spacing, mass, potential) = circle_parts(model).unwrap();
            let circle = CircleModel {
                cells,
                spacing,
                mass,
                potential,
            };
            let spin = SpinHalfModel { mu: *mu, b: *b };
            build_particle_spin(&circle, &spin).map_err(integration)
        }
    }
}

fn initial_polar(config: &RunConfig) -> Result<PolarField, CliError> {
    let dim = config.model.dim();
    let (modulus, phase) = match &config.initial {
        InitialStateSpec::GaussianPacket {
            center,
            width,
            momentum_quanta,
        } => {
            let (cells, spacing, _, _) = circle_parts(&config.model).unwrap();
            let length = cells as f64 * spacing;
            let momentum = 2.0 * std::f64::consts::PI * HBAR * *momentum_quanta as f64 / length;
            let mut p: Vec<f64> = (0..cells)
                .map(|k| {
                    let x = k as f64 * spacing;
                    (-PACKET_IMAGES..=PACKET_IMAGES)
                        .map(|j| {
                            let d = x - center + j as f64 * length;
                            (-d * d / (2.0 * width * width)).exp()
                        })
                        .sum::<f64>()
                })
                .collect();
            let total: f64 = p.iter().sum();
            for pk in &mut p {
                *pk /= total;
            }
            let modulus = p.iter().map(|pk| pk.sqrt()).collect();
            let phase = (0..cells)
                .map(|k| momentum * k as f64 * spacing)
                .collect();
            (modulus, phase)
        }
        InitialStateSpec::PlaneWave { q } => {
            let amp = (dim as f64).sqrt().recip();
            let phase = (0..dim)
                .map(|k| 2.0 * std::f64::consts::PI * HBAR * *q as f64 * k as f64 / dim as f64)
                .collect();
            (vec![amp; dim], phase)
        }
        InitialStateSpec::BasisState { n } => {
            let mut modulus = vec![0.0; dim];
            modulus[*n] = 1.0;
            (modulus, vec![0.0; dim])
        }
        InitialStateSpec::Explicit { modulus, phase } => {
            let norm: f64 = modulus.iter().map(|r| r * r).sum();
            if !(norm > 0.0) {
                return Err(CliError::validation("initial.modulus", "is a zero vector"));
            }
            let scale = norm.sqrt().recip();
            (
                modulus.iter().map(|r| r * scale).collect(),
                phase.clone(),
            )
        }
    };
    PolarField::new(modulus, phase).map_err(integration)
}

fn reference_scheme(dim: usize) -> IntegrationScheme {
    if dim <= SPECTRAL_DIM_LIMIT {
        IntegrationScheme::ExactExponential
    } else {
        IntegrationScheme::ImplicitMidpoint
    }
}

fn record_stride(config: &RunConfig) -> usize {
    config.record_every.unwrap_or(1).max(1)
}

/// Run the configured experiment and collect its time series.
pub fn execute(config: &RunConfig) -> Result<RunArtifacts, CliError> {
    config.validate()?;
    let polar = initial_polar(config)?;
    let steps = config.steps();
    let every = record_stride(config);
    let mut rows = Vec::new();
    let mut diagnostics = BTreeMap::new();

    match config.formulation {
        Formulation::Reference => {
            let h = build_generator(&config.model)?;
            let psi0 = polar_compose(&polar).map_err(integration)?;
            let integ = UnitaryIntegrator::new(h, config.dt, reference_scheme(config.model.dim()))
                .map_err(integration)?;
            let series = integ.evolve(&psi0, steps).map_err(integration)?;
            let mut norm_defect = 0.0_f64;
            for (k, psi) in series.iter().enumerate() {
                norm_defect = norm_defect.max((psi.norm_sqr() - 1.0).abs());
                if k % every != 0 && k != steps {
                    continue;
                }
                let t = k as f64 * config.dt;
                let pol = polar_decompose(psi);
                for (n, a) in psi.amps().iter().enumerate() {
                    rows.push(Row::new(t, "P", n, a.norm_sqr()));
                }
                for (n, s) in pol.phase().iter().enumerate() {
                    rows.push(Row::new(t, "S", n, *s));
                }
            }
            diagnostics.insert("norm_defect".into(), norm_defect);
        }
        Formulation::Wavefree => {
            let h = build_generator(&config.model)?;
            let geom = LinkGeometry::new(&h);
            let mut state = init_from_polar(&polar, &geom).map_err(integration)?;
            let scheme = match config.scheme.unwrap_or(WavefreeScheme::Midpoint) {
                WavefreeScheme::Explicit => StepScheme::Explicit,
                WavefreeScheme::Midpoint => StepScheme::Midpoint,
            };
            let series = evolve_wavefree(&mut state, &geom, config.dt, steps, every, scheme)
                .map_err(integration)?;
            for (i, &t) in series.times.iter().enumerate() {
                for (n, p) in series.p[i].iter().enumerate() {
                    rows.push(Row::new(t, "P", n, *p));
                }
                for (idx, l) in geom.links().iter().enumerate() {
                    rows.push(Row::new(t, "Tbar", format!("{}-{}", l.n, l.m), series.tbar_fwd[i][idx]));
                    rows.push(Row::new(t, "Tbar", format!("{}-{}", l.m, l.n), series.tbar_bwd[i][idx]));
                }
            }
            let d = state.diagnostics();
            diagnostics.insert("sign_flips".into(), d.sign_flips as f64);
            diagnostics.insert("max_theta_step".into(), d.max_theta_step);
            diagnostics.insert("projection_events".into(), d.projection_events as f64);
            diagnostics.insert("frozen_events".into(), d.frozen_events as f64);
            let total: f64 = state.probabilities().iter().sum();
            diagnostics.insert("probability_drift".into(), (total - 1.0).abs());
        }
        Formulation::F1Guided => {
            let h = build_generator(&config.model)?;
            let psi0 = polar_compose(&polar).map_err(integration)?;
            let integ = UnitaryIntegrator::new(h, config.dt, reference_scheme(config.model.dim()))
                .map_err(integration)?;
            let m = config.ensemble_size.unwrap();
            let ens = simulate_guided_ensemble(&psi0, &integ, m, steps, every, config.seed, None)
                .map_err(integration)?;
            for (i, &t) in ens.occupancy.times.iter().enumerate() {
                for (n, p) in ens.occupancy.occupancy[i].iter().enumerate() {
                    rows.push(Row::new(t, "P", n, *p));
                }
            }
            for traj in &ens.trajectories {
                for &(t, label) in &traj.samples {
                    rows.push(Row::new(t, "traj", traj.stream, label as f64));
                }
            }
            diagnostics.insert("cap_events".into(), ens.cap_events as f64);
        }
        Formulation::F2Ensemble => {
            let (cells, spacing, mass, potential) = circle_parts(&config.model).unwrap();
            let psi0 = polar_compose(&polar).map_err(integration)?;
            let v_field = f1_velocity_field(&psi0, spacing, mass).map_err(integration)?;
            let p0: Vec<f64> = polar.modulus().iter().map(|r| r * r).collect();
            let m = config.ensemble_size.unwrap();
            let (x, v) = sample_particles(&p0, &v_field, spacing, m, config.seed);
            let mut ens =
                ParticleEnsemble::new(x, v, mass, spacing, cells).map_err(integration)?;
            let estimator = match config.bandwidth {
                Some(bandwidth) => DensityEstimator::Gaussian { bandwidth },
                None => DensityEstimator::Histogram,
            };
            let density0 =
                spinzero_formulations::estimate_density(&ens, estimator).map_err(integration)?;
            push_grid_rows(&mut rows, 0.0, "P", &density0);
            let mut floor_events = 0.0;
            for k in 1..=steps {
                let (density, q) =
                    f2_step(&mut ens, &potential, config.dt, estimator).map_err(integration)?;
                floor_events += q.floor_events() as f64;
                if k % every == 0 || k == steps {
                    let t = k as f64 * config.dt;
                    push_grid_rows(&mut rows, t, "P", &density);
                    push_grid_rows(&mut rows, t, "Q", q.values());
                }
            }
            diagnostics.insert("q_floor_events".into(), floor_events);
        }
        Formulation::F3Hydro => {
            let (_, spacing, mass, potential) = circle_parts(&config.model).unwrap();
            let psi0 = polar_compose(&polar).map_err(integration)?;
            let v_field = f1_velocity_field(&psi0, spacing, mass).map_err(integration)?;
            let p0: Vec<f64> = polar.modulus().iter().map(|r| r * r).collect();
            let mut grid = GridField::new(p0, v_field, spacing).map_err(integration)?;
            push_grid_rows(&mut rows, 0.0, "P", grid.probabilities());
            push_grid_rows(&mut rows, 0.0, "v", grid.velocities());
            for k in 1..=steps {
                let q = f3_step(&mut grid, &potential, mass, config.dt).map_err(integration)?;
                if k % every == 0 || k == steps {
                    let t = k as f64 * config.dt;
                    push_grid_rows(&mut rows, t, "P", grid.probabilities());
                    push_grid_rows(&mut rows, t, "v", grid.velocities());
                    push_grid_rows(&mut rows, t, "Q", q.values());
                }
            }
            let total: f64 = grid.probabilities().iter().sum();
            diagnostics.insert("probability_drift".into(), (total - 1.0).abs());
        }
    }
    Ok(RunArtifacts { rows, diagnostics })
}

fn push_grid_rows(rows: &mut Vec<Row>, t: f64, quantity: &str, values: &[f64]) {
    for (k, v) in values.iter().enumerate() {
        rows.push(Row::new(t, quantity, k, *v));
    }
}

/// Inverse-CDF sample of `m` particle positions from the cell probabilities,
/// uniform within each cell; particle `j` draws from counter stream
/// `(seed, j)` so the ensemble is independent of iteration order. Velocities
/// are read from the cell the particle lands in.
fn sample_particles(
    p: &[f64],
    v_field: &[f64],
    spacing: f64,
    m: usize,
    seed: u64,
) -> (Vec<f64>, Vec<f64>) {
    let mut cdf = Vec::with_capacity(p.len());
    let mut acc = 0.0;
    for &pk in p {
        acc += pk;
        cdf.push(acc);
    }
    let total = acc;
    let mut x = Vec::with_capacity(m);
    let mut v = Vec::with_capacity(m);
    for j in 0..m {
        let mut rng = CounterRng::new(seed, j as u64);
        let u = rng.next_f64() * total;
        let cell = cdf.partition_point(|&c| c <= u).min(p.len() - 1);
        let lower = if cell == 0 { 0.0 } else { cdf[cell - 1] };
        let frac = if p[cell] > 0.0 {
            ((u - lower) / p[cell]).clamp(0.0, 1.0)
        } else {
            0.5
        };
        x.push((cell as f64 + frac) * spacing);
        v.push(v_field[cell]);
    }
    (x, v)
}
