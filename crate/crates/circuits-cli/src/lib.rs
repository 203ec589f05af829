//! File formats and command implementations for the `circuits` binary.

pub mod commands;
pub mod format;
