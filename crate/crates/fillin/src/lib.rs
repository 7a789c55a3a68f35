//! File formats, presets, parameter sweeps and the `fillin` command line on
//! top of [`fillin_core`].

pub mod cli;
pub mod error;
pub mod io;
pub mod preset;
pub mod sweep;

pub use error::{CliError, Result};
