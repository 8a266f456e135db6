use std::fmt;
use std::io;
use std::path::Path;

/// Failure of a subcommand, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad parameters or inputs (exit 2).
    Usage(String),
    /// Search ran out of `m` without a hit (exit 3).
    Exhausted(String),
    /// File or stream failure (exit 4).
    Io(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Exhausted(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn io(path: &Path, e: io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    pub fn io_opt(path: Option<&Path>, e: io::Error) -> Self {
        match path {
            Some(p) => CliError::io(p, e),
            None => CliError::Io(format!("stdout: {e}")),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Exhausted(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<quadirr::Error> for CliError {
    fn from(e: quadirr::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
