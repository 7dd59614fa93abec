//! Command implementations behind the `quadric` binary.

pub mod commands;
pub mod demo;
pub mod report;

pub use report::{Check, RunReport, Verdict};
