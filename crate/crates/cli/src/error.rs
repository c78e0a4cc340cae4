use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// The config or sample file could not be read as intended.
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("no configs found in {0}")]
    EmptySuite(PathBuf),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] cevm_core::CevmError),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Process exit status: 2 for unusable input, 3 for runtime failures.
    /// Tolerance failures are not errors; they exit 1 through the report.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Config(_) | CliError::EmptySuite(_) => 2,
            CliError::Io { .. } | CliError::Core(_) | CliError::Csv(_) => 3,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
