use std::fmt;
use std::process::ExitCode;

/// Failure of a subcommand, carrying the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(phigeo::Error),
    Io(std::io::Error),
    Verification { failed: usize, total: usize },
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Verification { .. } => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Library(e) => match e {
                phigeo::Error::Infeasible(_) => 3,
                phigeo::Error::NoConvergence { .. } => 4,
                _ => 2,
            },
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Verification { failed, total } => write!(f, "{failed} of {total} checks failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<phigeo::Error> for CliError {
    fn from(e: phigeo::Error) -> Self {
        CliError::Library(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("invalid JSON: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
