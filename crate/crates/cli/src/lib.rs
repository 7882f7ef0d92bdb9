//! Experiment runner for coherent-state quantum walks: JSON configs in,
//! CSV/JSON tables and SVG charts out.

pub mod chart;
pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use error::{CliError, Result};
