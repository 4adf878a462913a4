//! Config ingestion, text reports and CSV emission for `rds`.

pub mod commands;
pub mod config;
pub mod gallery;

pub use config::{parse_config, render, ConfigError, SystemConfig};
pub use gallery::gallery;
