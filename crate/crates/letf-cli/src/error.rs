//! CLI errors and their exit codes.

use thiserror::Error;

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for configuration, validation and domain errors.
pub const EXIT_VALIDATION: i32 = 1;
/// Exit code when the requested leverage or box is infeasible.
pub const EXIT_INFEASIBLE: i32 = 2;
/// Exit code for failed verification checks and simulation errors.
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] letf_robust::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use letf_robust::Error as E;
        match self {
            CliError::Core(E::Infeasible { .. }) => EXIT_INFEASIBLE,
            CliError::Core(E::Simulation(_)) => EXIT_VERIFICATION,
            _ => EXIT_VALIDATION,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Shorthand for a configuration error.
pub fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Config(msg.into()))
}
