//! Library face of the scenario runner: config schema, command
//! implementations, output plumbing. The `fr3lab` binary is a thin clap
//! wrapper over these.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
