use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical precondition violated: {0}")]
    Precondition(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Io(_) => ExitCode::from(1),
            CliError::Config(_) => ExitCode::from(2),
            CliError::Precondition(_) => ExitCode::from(3),
        }
    }
}

impl From<vecbeam::Error> for CliError {
    fn from(e: vecbeam::Error) -> Self {
        use vecbeam::Error as E;
        match e {
            E::Precondition(_) => CliError::Precondition(e.to_string()),
            E::Domain(_) | E::Shape(_) => CliError::Config(e.to_string()),
            E::Format(_) | E::Io(_) => CliError::Io(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
