//! Command-line experiments on top of `apnforge`: the compatibility sweep,
//! hexanomial verification, witness tables and the `(2^m, 2)` table.

pub mod commands;
pub mod config;
pub mod error;

pub use commands::{Outcome, VerifyArgs};
pub use config::{Format, RunConfig};
pub use error::{CliError, Exit};
