//! Rule-file DSL, JSON and DOT exporters, and the `multiway` command line.

pub mod commands;
pub mod dot;
pub mod dsl;
pub mod json;

pub use commands::{run, Cli, CliError, Outcome};
