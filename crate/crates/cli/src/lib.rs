//! Command-line front end for `relequil`: file ingestion, subcommand dispatch,
//! canonical JSON reports, and the built-in example table.

pub mod commands;
pub mod report;
pub mod worked;

pub use commands::{run, BackendChoice, Outcome, RunConfig, Subcommand};
