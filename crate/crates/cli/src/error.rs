use thiserror::Error;

/// Failure of a command, carrying the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validity(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validity(_) => 3,
            CliError::Data(_) => 4,
            CliError::Runtime(_) => 1,
        }
    }

    /// Reads a library error from an input file: domain problems there are
    /// problems with the data, not with the flags.
    pub fn from_data(e: skewtail_core::Error) -> Self {
        match e {
            skewtail_core::Error::Domain(_) | skewtail_core::Error::Data(_) => {
                CliError::Data(e.to_string())
            }
            other => other.into(),
        }
    }
}

impl From<skewtail_core::Error> for CliError {
    fn from(e: skewtail_core::Error) -> Self {
        use skewtail_core::Error as E;
        let msg = e.to_string();
        match e {
            E::Domain(_) => CliError::Usage(msg),
            E::Validity(_) => CliError::Validity(msg),
            E::Data(_) => CliError::Data(msg),
            E::ExcludedPoint(_) | E::Numerical(_) | E::Multiplicity(_) => CliError::Runtime(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
