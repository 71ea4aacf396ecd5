//! Spec files, reports and command drivers behind the `spinstat` binary.

pub mod commands;
pub mod error;
pub mod report;
pub mod specfile;

pub use commands::{run, Command, Input};
pub use error::CliError;
pub use report::VerdictReport;
