use thiserror::Error;

/// CLI failures, each mapped to a process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(ppmon_core::Error),
    /// A computation finished but produced no usable answer.
    #[error("{0}")]
    NoResult(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::NoResult(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<ppmon_core::Error> for CliError {
    fn from(e: ppmon_core::Error) -> Self {
        match e {
            ppmon_core::Error::Config(_) | ppmon_core::Error::Infeasible { .. } => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numerical(other),
        }
    }
}
