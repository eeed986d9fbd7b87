//! Experiment harness for `dirflow-core`: config documents and presets, a
//! seeded batch runner, plot-data export and property-check suites.

pub mod config;
pub mod error;
pub mod harness;
pub mod plot;
pub mod sampler;
pub mod stats;
pub mod validate;

pub use config::{preset, ExperimentConfig, Method, Scenario, PRESETS};
pub use error::ConfigError;
pub use harness::{run_scenario, Batch, BatchSummary, GroupSummary, RunRecord};
pub use plot::emit_plot_data;
pub use validate::{run_suite, Report, SUITES};
