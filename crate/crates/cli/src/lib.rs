//! Library side of the `superinfo` command: model documents, amplitude
//! tokens, subcommand bodies and run reports.

pub mod amplitude;
pub mod commands;
pub mod report;
pub mod spec;
