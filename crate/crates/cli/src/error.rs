use std::fmt;

/// Failure of a CLI command, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config entries or argument ranges (exit 2).
    Usage(String),
    /// Model or domain failure reported by the library (exit 3).
    Model(String),
    /// Output could not be written (exit 3).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(_) | CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Model(m) => write!(f, "model error: {m}"),
            CliError::Io(m) => write!(f, "output error: {m}"),
        }
    }
}

impl From<rootexp::Error> for CliError {
    fn from(e: rootexp::Error) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Model(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
