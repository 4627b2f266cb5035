//! Command-line front end for `phigeo`.

pub mod commands;
pub mod error;
pub mod family;
pub mod output;

pub use commands::{dispatch, Cli, Command};
pub use error::{CliError, CliResult};
