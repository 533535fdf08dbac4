//! Config-driven front end: TOML schema, sweeps, exact-evolution oracle and reports.

pub mod config;
pub mod error;
pub mod oracle;
pub mod output;
pub mod run;
pub mod sweep_spec;

pub use config::{load_config, parse_config, SimulationConfig};
pub use error::CliError;
pub use run::{run, Row, RunOptions, RunOutput};
pub use sweep_spec::SweepSpec;

/// Configuration used when no `--config` is given.
pub const DEFAULT_CONFIG: &str = include_str!("../configs/single.toml");
