//! Std companion to `optpred-core`: JSON and CSV formats, rayon-backed
//! runners, verification suites and the `optpred` command-line tool.

pub mod cli;
pub mod csv;
pub mod error;
pub mod format;
pub mod parallel;
pub mod verify;

pub use error::{CliError, Result};
pub use parallel::Parallel;
