//! Experiment plumbing for the fadmm solvers: TOML run specs, dataset
//! resolution, CSV/SVG/JSON outputs and built-in benchmark suites.

pub mod bench;
pub mod config;
pub mod data;
pub mod experiment;
pub mod plot;
pub mod selftest;

pub use config::{parse_config, ConfigError, RunSpec};
pub use experiment::{run_experiment, run_instances, Experiment, CSV_HEADER};
pub use plot::{emit_svg, render_svg, Metric};
