use std::io;
use std::path::PathBuf;

use thiserror::Error;
use werner_core::{DynamicsError, StateError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("validation failure: {0}")]
    Validation(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
}

impl From<werner_core::Error> for CliError {
    fn from(e: werner_core::Error) -> Self {
        use werner_core::Error as E;
        let invalid_state = match &e {
            E::State(s) => !matches!(
                s,
                StateError::InvalidMixing(_) | StateError::UnknownFamily(_) | StateError::Json(_)
            ),
            E::Dynamics(d) => matches!(d, DynamicsError::ValidationFailure(_)),
            E::Matrix(_) => true,
            E::ClosedForm(_) | E::Analysis(_) => false,
        };
        if invalid_state {
            CliError::Validation(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        werner_core::Error::from(e).into()
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        werner_core::Error::from(e).into()
    }
}
