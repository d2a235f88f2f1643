//! Library side of the `fewcoef` command: configuration, reports and subcommands.

pub mod commands;
pub mod config;
pub mod report;
