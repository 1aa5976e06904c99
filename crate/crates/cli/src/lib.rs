//! Command-line front end: config loading, running and report writing.

pub mod config;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use zalad_core::{run_experiment, ExperimentResult};

pub use config::{parse_config, ConfigError, Overrides, RunConfig, RunConfigFile};
pub use output::{emit_csv, summarize, OutputError};

pub const CSV_FILE: &str = "msd.csv";
pub const SUMMARY_FILE: &str = "summary.txt";
pub const CONFIG_ECHO_FILE: &str = "config.json";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Output(#[from] OutputError),

    #[error("experiment failed: {0}")]
    Run(#[from] zalad_core::Error),

    #[error("cannot create output directory {}: {source}", path.display())]
    OutputDir {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status: 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

pub fn execute(run: &RunConfig) -> Result<ExperimentResult, CliError> {
    Ok(run_experiment(&run.scenario, run.master_seed, run.parallelism)?)
}

/// Writes the CSV, the summary and the resolved config into `dir`.
pub fn write_outputs(run: &RunConfig, result: &ExperimentResult, dir: &Path) -> Result<String, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::OutputDir {
        path: dir.to_owned(),
        source,
    })?;
    emit_csv(result, &dir.join(CSV_FILE))?;
    let summary = summarize(result);
    output::write_text(&dir.join(SUMMARY_FILE), &summary)?;
    let echo = serde_json::to_string_pretty(&RunConfigFile::echo(run)).expect("config echo is always serializable");
    output::write_text(&dir.join(CONFIG_ECHO_FILE), &(echo + "\n"))?;
    Ok(summary)
}
