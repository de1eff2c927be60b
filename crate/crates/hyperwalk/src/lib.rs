//! File formats, parallel drivers and the verification harness for
//! `hyperwalk-core`, plus the `hyperwalk` command line.

pub mod analysis;
pub mod config;
pub mod error;
pub mod format;
pub mod simulate;
pub mod verify;

pub use error::{exit, CliError};
