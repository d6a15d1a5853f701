use gsched_core::{CompileError, GraphError};
use thiserror::Error;

/// Process exit codes. Clap reports usage errors with 2.
pub mod code {
    pub const OK: u8 = 0;
    pub const IO: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const PARSE: u8 = 3;
    pub const DISCONNECTED: u8 = 4;
    pub const VERIFY: u8 = 5;
    pub const DIMENSION: u8 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("input graph is not connected")]
    Disconnected,
    #[error("{0}")]
    Verify(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => code::IO,
            CliError::Usage(_) => code::USAGE,
            CliError::Parse(_) => code::PARSE,
            CliError::Disconnected => code::DISCONNECTED,
            CliError::Verify(_) => code::VERIFY,
            CliError::Dimension(_) => code::DIMENSION,
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<GraphError> for CliError {
    fn from(err: GraphError) -> Self {
        match err {
            GraphError::Io(msg) => CliError::Io(msg),
            GraphError::Disconnected => CliError::Disconnected,
            GraphError::BadSpec(_)
            | GraphError::EdgeCountOutOfRange { .. }
            | GraphError::RetryBudgetExhausted { .. } => CliError::Usage(err.to_string()),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<CompileError> for CliError {
    fn from(err: CompileError) -> Self {
        match err {
            CompileError::Disconnected => CliError::Disconnected,
            other => CliError::Verify(other.to_string()),
        }
    }
}
