//! Text formats and the command-line front end.

pub mod cli;
pub mod formats;

pub use cli::{run, CliError};
