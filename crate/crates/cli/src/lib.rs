//! Command-line front end for the fragmentation toolkit: configuration
//! files, seeded parallel ensembles, CSV/JSON artifacts and the
//! reproduction commands behind the `fragsim` binary.

pub mod analysis;
pub mod commands;
pub mod config;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod manifest;
pub mod table1;

pub use error::{CliError, Result};
