//! Command-line front end of `onecircle`: subcommands, output writers and
//! the acceptance suite behind `onecircle selftest`.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod sampling;
pub mod svg;

pub use config::{CommandConfig, Format};
pub use error::CliError;
