//! File format, reports and commands behind the `polymatroid` binary.

pub mod commands;
pub mod format;
pub mod report;
