//! Command-line front end for the harmonia library: verification suites,
//! tables and one-off evaluations.

pub mod config;
pub mod error;
pub mod parse;
pub mod report;
pub mod space;
pub mod suites;
pub mod table;

pub use config::{Config, Overrides};
pub use error::{CliError, Result};
pub use report::{Check, VerificationReport};
pub use space::SpaceSpec;
pub use suites::{run_suite, Suite};
pub use table::{emit_table, Format, Quantity, Table};
