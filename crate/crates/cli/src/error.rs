use std::path::PathBuf;

use thiserror::Error;

/// Exit code for command-line usage errors (reported by the argument parser).
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INPUT: i32 = 4;
pub const EXIT_ANALYSIS: i32 = 5;
pub const EXIT_SERVE: i32 = 6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        source: cartograph_core::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Analysis(#[from] cartograph_core::Error),

    #[error("serve: {0}")]
    Serve(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Input { .. } => EXIT_INPUT,
            CliError::Analysis(_) => EXIT_ANALYSIS,
            CliError::Serve(_) => EXIT_SERVE,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
