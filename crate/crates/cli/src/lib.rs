//! File formats, configuration and commands for the `copent` tool.
//!
//! Exit codes: 0 success, 2 input-data error, 3 parameter error,
//! 4 consistency error.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod config;
mod error;
pub mod io;

pub use error::{CliError, Result};
