//! Command-line driver for `ltphi-core`: commands, verification suites and
//! the text formats they read and write.

pub mod classes;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod spec;
pub mod suites;

pub use config::{FChoice, RunConfig};
pub use error::CliError;
