use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced to the shell, each with a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: line {line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: scenval_core::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn core(context: impl Into<String>, source: scenval_core::Error) -> Self {
        CliError::Core {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Output(_) => 2,
            CliError::Usage(_) => 3,
            CliError::Core { source, .. } => match source {
                scenval_core::Error::QuadratureNotConverged { .. } => 4,
                _ => 3,
            },
            CliError::Numerical(_) => 4,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
