use serde::Serialize;

use models_experiments::{continuum_limit_experiment, PacketSpec};

use crate::compare::compare_rows;
use crate::config::{Formulation, InitialStateSpec, ModelSpec, RunConfig};
use crate::error::integration;
use crate::runner::execute;
use crate::CliError;

/// Which configuration parameter the sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Time step; error is the sup distance of `P` from a reference run.
    Dt,
    /// Grid spacing at fixed domain length; error is the velocity-law defect.
    Spacing,
    /// Ensemble size; error is the empirical-density distance from the
    /// matching deterministic run.
    EnsembleSize,
}

impl std::str::FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dt" => Ok(SweepAxis::Dt),
            "a" => Ok(SweepAxis::Spacing),
            "m" | "M" => Ok(SweepAxis::EnsembleSize),
            other => Err(format!("unknown sweep axis `{other}` (expected dt, a, M)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub axis: String,
    pub points: Vec<SweepPoint>,
    /// Slope of `ln error` against `ln value`.
    pub fitted_order: f64,
}

fn fit_order(points: &[SweepPoint]) -> f64 {
    let pairs: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.error > 0.0 && p.value > 0.0)
        .map(|p| (p.value.ln(), p.error.ln()))
        .collect();
    if pairs.len() < 2 {
        return f64::NAN;
    }
    let n = pairs.len() as f64;
    let sx: f64 = pairs.iter().map(|&(x, _)| x).sum();
    let sy: f64 = pairs.iter().map(|&(_, y)| y).sum();
    let sxx: f64 = pairs.iter().map(|&(x, _)| x * x).sum();
    let sxy: f64 = pairs.iter().map(|&(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn dt_error(config: &RunConfig, dt: f64) -> Result<f64, CliError> {
    if config.formulation == Formulation::Reference {
        return Err(CliError::validation(
            "formulation",
            "dt sweep needs a non-reference formulation to compare against the reference",
        ));
    }
    let mut run = config.clone();
    run.dt = dt;
    let mut reference = run.clone();
    reference.formulation = Formulation::Reference;
    reference.ensemble_size = None;
    let a = execute(&run)?;
    let b = execute(&reference)?;
    Ok(compare_rows(&a.rows, &b.rows, "P")?.sup)
}

fn spacing_error(config: &RunConfig, spacing: f64) -> Result<f64, CliError> {
    let (cells0, a0, mass) = match &config.model {
        ModelSpec::Circle {
            cells,
            spacing,
            mass,
            ..
        } => (*cells, *spacing, *mass),
        _ => {
            return Err(CliError::validation(
                "model",
                "spacing sweep requires a circle model",
            ))
        }
    };
    let (center, width, momentum_quanta) = match &config.initial {
        InitialStateSpec::GaussianPacket {
            center,
            width,
            momentum_quanta,
        } => (*center, *width, *momentum_quanta),
        _ => {
            return Err(CliError::validation(
                "initial",
                "spacing sweep requires a gaussian-packet initial state",
            ))
        }
    };
    let length = cells0 as f64 * a0;
    let cells = (length / spacing).round() as usize;
    if cells < 5 {
        return Err(CliError::validation(
            "axis",
            format!("spacing {spacing} leaves only {cells} cells"),
        ));
    }
    let spec = PacketSpec {
        length,
        center,
        width,
        momentum_quanta,
        mass,
    };
    let report = continuum_limit_experiment(&[cells], &spec).map_err(integration)?;
    Ok(report.errors[0])
}

fn ensemble_error(config: &RunConfig, m: usize) -> Result<f64, CliError> {
    let mut run = config.clone();
    run.ensemble_size = Some(m);
    match config.formulation {
        Formulation::F1Guided => {
            let mut reference = run.clone();
            reference.formulation = Formulation::Reference;
            reference.ensemble_size = None;
            let a = execute(&run)?;
            let b = execute(&reference)?;
            Ok(compare_rows(&a.rows, &b.rows, "P")?.sup)
        }
        Formulation::F2Ensemble => {
            let mut grid = run.clone();
            grid.formulation = Formulation::F3Hydro;
            grid.ensemble_size = None;
            let a = execute(&run)?;
            let b = execute(&grid)?;
            let t_final = a
                .rows
                .iter()
                .filter(|r| r.quantity == "P")
                .map(|r| r.t)
                .fold(0.0_f64, f64::max);
            let sum = |rows: &[crate::output::Row], index: &str| {
                rows.iter()
                    .find(|r| r.quantity == "P" && r.t == t_final && r.index == index)
                    .map(|r| r.value)
            };
            let mut l1 = 0.0;
            for r in b.rows.iter().filter(|r| r.quantity == "P" && r.t == t_final) {
                let va = sum(&a.rows, &r.index).ok_or_else(|| {
                    CliError::SchemaMismatch("ensemble and grid runs disagree on cells".into())
                })?;
                l1 += (va - r.value).abs();
            }
            Ok(l1)
        }
        _ => Err(CliError::validation(
            "formulation",
            "ensemble sweep requires f1-guided or f2-ensemble",
        )),
    }
}

/// Rerun the configuration once per axis value and fit the error order.
pub fn sweep(config: &RunConfig, axis: SweepAxis, values: &[f64]) -> Result<SweepReport, CliError> {
    if values.is_empty() {
        return Err(CliError::validation("values", "sweep needs at least one value"));
    }
    config.validate()?;
    let mut points = Vec::with_capacity(values.len());
    for &v in values {
        let error = match axis {
            SweepAxis::Dt => {
                if !(v > 0.0) {
                    return Err(CliError::validation("values", format!("bad dt {v}")));
                }
                dt_error(config, v)?
            }
            SweepAxis::Spacing => {
                if !(v > 0.0) {
                    return Err(CliError::validation("values", format!("bad spacing {v}")));
                }
                spacing_error(config, v)?
            }
            SweepAxis::EnsembleSize => {
                if v < 1.0 || v.fract() != 0.0 {
                    return Err(CliError::validation(
                        "values",
                        format!("ensemble size {v} is not a positive integer"),
                    ));
                }
                ensemble_error(config, v as usize)?
            }
        };
        points.push(SweepPoint { value: v, error });
    }
    let fitted_order = fit_order(&points);
    Ok(SweepReport {
        axis: match axis {
            SweepAxis::Dt => "dt",
            SweepAxis::Spacing => "a",
            SweepAxis::EnsembleSize => "M",
        }
        .to_string(),
        points,
        fitted_order,
    })
}
