use thiserror::Error;

use pulsebeam_core::ErrorKind;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Accuracy(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<pulsebeam_core::Error> for CliError {
    fn from(e: pulsebeam_core::Error) -> Self {
        match e.kind() {
            ErrorKind::Validation => CliError::Validation(e.to_string()),
            ErrorKind::Accuracy => CliError::Accuracy(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
