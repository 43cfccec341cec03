use thiserror::Error;

/// Failures reported by the command-line layer, each with its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<linvar_core::Error> for CliError {
    fn from(e: linvar_core::Error) -> Self {
        use linvar_core::Error as E;
        match e {
            E::TooLarge { .. } | E::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            E::DimensionMismatch { .. } | E::InvalidArgument(_) | E::InvariantViolated(_) => {
                CliError::Input(e.to_string())
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
