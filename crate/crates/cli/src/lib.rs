//! Library half of the `opdyn` command-line tool: file formats, run
//! manifests, bundled example fixtures, and the subcommand
//! implementations. Kept as a library so integration tests can drive
//! the same code paths the binary uses.

pub mod commands;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod manifest;
pub mod report;

pub use error::{CliError, ExitCode};
