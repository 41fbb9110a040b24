//! Config-driven analysis runs for `alphastab`.

pub mod config;
pub mod examples;
pub mod plot;
pub mod run;

pub use config::{Analysis, AnalysisConfig, ConfigError};
pub use plot::emit_plot_data;
pub use run::{run, RunError, RunOptions, RunReport};
