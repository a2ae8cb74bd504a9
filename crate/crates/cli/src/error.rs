use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: unreadable files, parse failures, invalid parameters.
    #[error("{0}")]
    Input(String),

    /// Everything loaded but no requested index could be computed.
    #[error("{0}")]
    Undefined(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Undefined(_) => 1,
        }
    }
}

impl From<nds_core::GraphError> for CliError {
    fn from(e: nds_core::GraphError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
