//! Configuration-driven experiment runner: JSON run configs, deterministic
//! seeding, CSV time-series export with a config-hash manifest, run
//! comparison, and parameter sweeps. The command-line binary is a thin shell
//! over this library so tests can drive everything in-process.

mod compare;
mod config;
mod error;
mod output;
mod runner;
mod sweep;

pub use compare::{check_tolerance, compare_rows, CompareReport, Norm};
pub use config::{
    canonical_json, Formulation, InitialStateSpec, ModelSpec, RunConfig, Tolerances,
    WavefreeScheme,
};
pub use error::CliError;
pub use output::{config_hash, format_value, read_series, write_run, write_series, Manifest, Row};
pub use runner::{execute, RunArtifacts};
pub use sweep::{sweep, SweepAxis, SweepPoint, SweepReport};
