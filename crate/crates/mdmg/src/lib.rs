//! Configuration files, presets, output writers and a sparse direct
//! reference solver around [`mdmg_core`].

pub mod config;
pub mod error;
pub mod experiment;
pub mod oracle;
pub mod output;
pub mod preset;

pub use mdmg_core;

pub use config::ExperimentConfig;
pub use error::{ConfigError, Result};
