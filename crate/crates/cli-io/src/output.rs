use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{canonical_json, RunConfig};
use crate::CliError;

/// One time-series sample. `quantity` is one of `P`, `Tbar`, `v`, `Q`, `S`,
/// `traj`; `index` is a label, a directed link `n-m`, or a trajectory id.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub t: f64,
    pub quantity: String,
    pub index: String,
    pub value: f64,
}

impl Row {
    pub fn new(t: f64, quantity: &str, index: impl ToString, value: f64) -> Self {
        Self {
            t,
            quantity: quantity.to_string(),
            index: index.to_string(),
            value,
        }
    }
}

/// Run manifest written next to the data files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: RunConfig,
    /// SHA-256 of the canonical config JSON; every data file repeats it.
    pub hash: String,
    pub seed: u64,
    pub versions: BTreeMap<String, String>,
    pub wall_time_ms: f64,
}

pub fn config_hash(config: &RunConfig) -> String {
    let digest = Sha256::digest(canonical_json(config).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn crate_versions() -> BTreeMap<String, String> {
    let v = env!("CARGO_PKG_VERSION").to_string();
    [
        "lattice-core",
        "reference-solver",
        "wavefree-bbb",
        "spinzero-formulations",
        "models-experiments",
        "cli-io",
    ]
    .iter()
    .map(|name| (name.to_string(), v.clone()))
    .collect()
}

/// 17 significant digits, enough for a bit-faithful f64 round-trip.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write the time series CSV: a config-hash comment line, the fixed header,
/// then one row per sample.
pub fn write_series(path: &Path, hash: &str, rows: &[Row]) -> Result<(), CliError> {
    let file = std::fs::File::create(path).map_err(io_err(path))?;
    let mut w = std::io::BufWriter::new(file);
    let inner = (|| {
        writeln!(w, "# config-hash {hash}")?;
        writeln!(w, "t,quantity,index,value")?;
        for r in rows {
            writeln!(
                w,
                "{},{},{},{}",
                format_value(r.t),
                r.quantity,
                r.index,
                format_value(r.value)
            )?;
        }
        w.flush()
    })();
    inner.map_err(io_err(path))
}

/// Read a series CSV back, skipping comment lines and validating the header.
pub fn read_series(path: &Path) -> Result<Vec<Row>, CliError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (lineno, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        if !header_seen {
            if line != "t,quantity,index,value" {
                return Err(CliError::BadRow {
                    path: path.to_path_buf(),
                    line: lineno + 1,
                    message: format!("unexpected header `{line}`"),
                });
            }
            header_seen = true;
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 4 {
            return Err(CliError::BadRow {
                path: path.to_path_buf(),
                line: lineno + 1,
                message: format!("expected 4 fields, got {}", parts.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| CliError::BadRow {
                path: path.to_path_buf(),
                line: lineno + 1,
                message: e.to_string(),
            })
        };
        rows.push(Row {
            t: parse(parts[0])?,
            quantity: parts[1].to_string(),
            index: parts[2].to_string(),
            value: parse(parts[3])?,
        });
    }
    Ok(rows)
}

/// Write series, diagnostics, and manifest into `out_dir`; returns the
/// manifest and the series path.
pub fn write_run(
    config: &RunConfig,
    rows: &[Row],
    diagnostics: &BTreeMap<String, f64>,
    out_dir: &Path,
    wall_time_ms: f64,
) -> Result<(Manifest, PathBuf), CliError> {
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let hash = config_hash(config);
    let series_path = out_dir.join("series.csv");
    write_series(&series_path, &hash, rows)?;

    let diag_path = out_dir.join("diagnostics.json");
    let diag_doc = serde_json::json!({ "hash": hash, "diagnostics": diagnostics });
    std::fs::write(&diag_path, format!("{:#}\n", diag_doc)).map_err(io_err(&diag_path))?;

    let manifest = Manifest {
        config: config.clone(),
        hash,
        seed: config.seed,
        versions: crate_versions(),
        wall_time_ms,
    };
    let manifest_path = out_dir.join("manifest.json");
    let body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(&manifest_path, body + "\n").map_err(io_err(&manifest_path))?;
    Ok((manifest, series_path))
}
