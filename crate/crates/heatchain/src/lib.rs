//! Experiment plans, file formats and the command-line driver built on
//! [`heatchain_core`].

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod plot;

pub use error::{AppError, Result};
