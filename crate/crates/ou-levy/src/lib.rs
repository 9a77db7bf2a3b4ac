#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Configuration, report files and command orchestration for the
//! `ou-levy` command-line tool. The numerics live in `ou_levy_core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod parallel;
pub mod report;

pub use config::{ExperimentConfig, Format, Overrides};
pub use error::CliError;
pub use report::Report;
