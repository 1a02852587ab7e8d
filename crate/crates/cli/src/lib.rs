//! Command-line front end: grid sampling of field quantities to CSV and the
//! verification runner.

pub mod commands;
pub mod config;
pub mod error;
pub mod grid;
pub mod output;

pub use commands::{compute, run, Command};
pub use config::RunConfig;
pub use error::CliError;
