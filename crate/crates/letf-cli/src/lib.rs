//! Command-line front end for `letf-robust`.
//!
//! A run is described by a [`RunConfig`] read from TOML, executed by
//! [`run`], and written as CSV or JSON through [`Table`].

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run, Outcome};
pub use config::{Command, RunConfig};
pub use error::{CliError, Result};
pub use output::{Format, Table};
