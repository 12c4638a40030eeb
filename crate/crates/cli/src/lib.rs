//! Library half of the `qgamma` binary.
//!
//! Each subcommand is a plain function returning a serialisable record, so
//! the integration tests can drive the same code paths as the binary.

pub mod app;
pub mod error;
pub mod eval;
pub mod output;
pub mod parse;
pub mod rate;
pub mod table;
pub mod verify;

pub use error::CliError;
