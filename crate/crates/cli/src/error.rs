use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error("config line {line}: {message}")]
    ConfigLine { line: usize, message: String },

    #[error("unknown preset '{0}' (see list-presets)")]
    UnknownPreset(String),

    #[error("preset {preset} locks '{key}'")]
    Locked { preset: String, key: String },

    #[error("preset {preset} does not accept an override of '{key}' (allowed: dx, dt, t_end, scheme)")]
    NotOverridable { preset: String, key: String },

    #[error("run ended at t = {run} but the oracle was requested at t = {oracle}")]
    TimeMismatch { run: f64, oracle: f64 },

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] nwave_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use nwave_core::Error as E;
        match self {
            CliError::Invariant(_) => EXIT_INVARIANT,
            CliError::Core(
                E::CflViolation { .. } | E::DomainTooSmall { .. } | E::SupportOutsideGrid { .. } | E::NonFinite { .. },
            ) => EXIT_NUMERICAL,
            _ => EXIT_CONFIG,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
