//! File format, reports and commands for the `dynlab` tool.

pub mod cli;
pub mod dot;
pub mod format;
pub mod report;
pub mod study;
