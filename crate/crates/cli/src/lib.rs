//! Command-line front end for `qframes`: built-in and file-based scenarios,
//! human tables and versioned JSON reports.

pub mod args;
pub mod commands;
pub mod render;
pub mod report;
pub mod scenario_file;

pub use commands::{run, run_from, CommandResult};
