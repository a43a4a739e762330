use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config field `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("cannot read `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse `{path}`: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("runs have mismatched schemas: {0}")]
    SchemaMismatch(String),

    #[error("comparison exceeded tolerance: {metric} = {value}, allowed {tolerance}")]
    ToleranceExceeded {
        metric: String,
        value: f64,
        tolerance: f64,
    },

    #[error("bad CSV row {line} in `{path}`: {message}")]
    BadRow {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl CliError {
    /// Process exit code: 1 validation, 2 integration, 3 tolerance.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. }
            | CliError::Io { .. }
            | CliError::Parse { .. }
            | CliError::SchemaMismatch { .. }
            | CliError::BadRow { .. } => 1,
            CliError::Integration(_) => 2,
            CliError::ToleranceExceeded { .. } => 3,
        }
    }

    pub(crate) fn validation(field: &str, message: impl Into<String>) -> Self {
        CliError::Validation {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

/// Map any domain error into an integration failure with its display text.
pub(crate) fn integration<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Integration(e.to_string())
}
