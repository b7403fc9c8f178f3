//! Library half of the `kpb` command-line tool: configuration, subcommand
//! bodies and output writers. The binary in `main.rs` only parses flags.

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod svg;

pub use config::RunConfig;
pub use error::{exit, CliError};
