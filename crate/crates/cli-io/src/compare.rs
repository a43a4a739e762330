use std::collections::BTreeMap;

use serde::Serialize;

use crate::output::Row;
use crate::CliError;

/// Which metric a tolerance check applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    Sup,
    L2,
    RelL2,
}

impl std::str::FromStr for Norm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sup" => Ok(Norm::Sup),
            "l2" => Ok(Norm::L2),
            "rel-l2" => Ok(Norm::RelL2),
            other => Err(format!("unknown norm `{other}` (expected sup, l2, rel-l2)")),
        }
    }
}

/// Error metrics of one quantity between two runs on a shared time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub quantity: String,
    pub points: usize,
    pub sup: f64,
    pub sup_t: f64,
    pub sup_index: String,
    pub l2: f64,
    /// `l2` normalized by the L2 size of run B (the reference side).
    pub rel_l2: f64,
}

impl CompareReport {
    pub fn metric(&self, norm: Norm) -> f64 {
        match norm {
            Norm::Sup => self.sup,
            Norm::L2 => self.l2,
            Norm::RelL2 => self.rel_l2,
        }
    }
}

/// Relative slack when deciding that two sample times are the same grid
/// point; accumulated `t += dt` and computed `k·dt` grids differ by rounding.
const TIME_MATCH_TOL: f64 = 1e-9;

fn distinct_times(rows: &[Row], quantity: &str) -> Vec<f64> {
    let mut bits: Vec<u64> = rows
        .iter()
        .filter(|r| r.quantity == quantity)
        .map(|r| r.t.to_bits())
        .collect();
    bits.sort_unstable();
    bits.dedup();
    let mut times: Vec<f64> = bits.into_iter().map(f64::from_bits).collect();
    times.sort_by(f64::total_cmp);
    times
}

fn keyed(rows: &[Row], quantity: &str, times: &[f64]) -> BTreeMap<(usize, String), (f64, f64)> {
    rows.iter()
        .filter(|r| r.quantity == quantity)
        .map(|r| {
            let rank = times.partition_point(|&t| t < r.t);
            let rank = if rank < times.len() && times[rank] == r.t {
                rank
            } else {
                rank - 1
            };
            ((rank, r.index.clone()), (r.t, r.value))
        })
        .collect()
}

/// Pointwise comparison of `quantity` between two row sets. The runs must
/// cover the same time grid (within rounding) and the same indices.
pub fn compare_rows(a: &[Row], b: &[Row], quantity: &str) -> Result<CompareReport, CliError> {
    let ta = distinct_times(a, quantity);
    let tb = distinct_times(b, quantity);
    if ta.is_empty() || tb.is_empty() {
        return Err(CliError::SchemaMismatch(format!(
            "quantity `{quantity}` missing from {} input",
            if ta.is_empty() { "the first" } else { "the second" }
        )));
    }
    if ta.len() != tb.len() {
        return Err(CliError::SchemaMismatch(format!(
            "quantity `{quantity}` has {} sample times in one run and {} in the other",
            ta.len(),
            tb.len()
        )));
    }
    for (&x, &y) in ta.iter().zip(&tb) {
        if (x - y).abs() > TIME_MATCH_TOL * x.abs().max(1.0) {
            return Err(CliError::SchemaMismatch(format!(
                "quantity `{quantity}` time grids differ: {x} vs {y}"
            )));
        }
    }
    let ka = keyed(a, quantity, &ta);
    let kb = keyed(b, quantity, &tb);
    if ka.len() != kb.len() || !ka.keys().eq(kb.keys()) {
        return Err(CliError::SchemaMismatch(format!(
            "quantity `{quantity}` covers different index sets ({} vs {} points)",
            ka.len(),
            kb.len()
        )));
    }
    let mut sup = 0.0_f64;
    let mut sup_t = 0.0;
    let mut sup_index = String::new();
    let mut sq = 0.0;
    let mut ref_sq = 0.0;
    for (key, &(t, va)) in &ka {
        let (_, vb) = kb[key];
        let d = (va - vb).abs();
        if d > sup {
            sup = d;
            sup_t = t;
            sup_index = key.1.clone();
        }
        sq += d * d;
        ref_sq += vb * vb;
    }
    let l2 = sq.sqrt();
    Ok(CompareReport {
        quantity: quantity.to_string(),
        points: ka.len(),
        sup,
        sup_t,
        sup_index,
        l2,
        rel_l2: if ref_sq > 0.0 { l2 / ref_sq.sqrt() } else { l2 },
    })
}

/// Fail with exit code 3 when the selected metric exceeds `tolerance`.
pub fn check_tolerance(
    report: &CompareReport,
    norm: Norm,
    tolerance: f64,
) -> Result<(), CliError> {
    let value = report.metric(norm);
    if value > tolerance {
        return Err(CliError::ToleranceExceeded {
            metric: format!("{norm:?}").to_lowercase(),
            value,
            tolerance,
        });
    }
    Ok(())
}
