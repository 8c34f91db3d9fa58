//! File formats, reports and the cross-validation harness for the `bodybar`
//! command line tool.

pub mod corpus;
pub mod document;
pub mod error;
pub mod matrix_csv;
pub mod report;
pub mod trace;
pub mod verify;

pub use error::{exit, CliError, Diagnostic, Result};
