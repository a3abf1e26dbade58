//! Library side of the `folner` binary: argument types, subcommands and the
//! artifact formats they read and write.

pub mod commands;
pub mod config;
pub mod io;
pub mod presets;
pub mod render;

pub use commands::{run, Cli, CliError, Command};
