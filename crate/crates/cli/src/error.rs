use std::fmt;
use std::process::ExitCode;

/// A failure that ends the run, sorted by the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, missing or malformed configuration, nonphysical input.
    Usage(String),
    /// A numerical routine gave up or a check exceeded its tolerance.
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        })
    }

    pub fn io(context: impl fmt::Display, err: std::io::Error) -> Self {
        CliError::Io(format!("{context}: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl From<vdl_core::Error> for CliError {
    fn from(err: vdl_core::Error) -> Self {
        use vdl_core::Error as E;
        match err {
            E::Domain(_) | E::Precondition(_) | E::Capability(_) => CliError::Usage(err.to_string()),
            E::Overflow { .. } | E::NonConvergence { .. } | E::Quadrature { .. } => {
                CliError::Numerical(err.to_string())
            }
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
