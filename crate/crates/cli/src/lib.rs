//! Command-line front end: the expression grammar, argument definitions and dispatch.

pub mod args;
pub mod parse;
pub mod run;

pub use args::{Cli, Command};
pub use parse::{parse_index, parse_scalar, parse_vector, parse_word, ParseError};
pub use run::{run_command, CliError, Outcome};
