//! Experiment presets, configuration, CSV output and oracle comparison for
//! `nwave-core`.

pub mod compare;
pub mod config;
pub mod csv;
pub mod error;
pub mod presets;
pub mod runner;

pub use compare::{compare_to_exact, ErrorRow};
pub use config::{InitialData, RunSpec};
pub use csv::{emit_csv, Series};
pub use error::{CliError, Result};
pub use presets::ExperimentPreset;
pub use runner::{execute, RunReport};

/// Runs a named preset with whitelisted overrides.
pub fn run_preset(name: &str, overrides: &[(String, String)], out_dir: Option<&std::path::Path>) -> Result<RunReport> {
    let preset = ExperimentPreset::named(name)?.with_overrides(overrides)?;
    execute(&preset, out_dir)
}
