//! Error type shared by every module.

use thiserror::Error;

/// Failures raised by the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// One or more standing assumptions on the model or problem fail.
    #[error("invalid input: {}", .0.join("; "))]
    Validation(Vec<String>),

    /// A β-dependent side condition fails.
    #[error("infeasible at beta = {beta}: {note}")]
    Infeasible { beta: f64, note: String },

    /// A formula was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested operation does not apply to this model family.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Monte-Carlo simulation produced unusable output.
    #[error("simulation failed: {0}")]
    Simulation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
