//! Command-line front end for `statdyn`: TOML scenario files, batch sweeps,
//! CSV tables and SVG plots.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod scenario;
pub mod sweep;

pub use commands::{execute, Cli, Command};
pub use config::Config;
pub use error::CliError;
