//! JSON run configuration.
//!
//! A config either names a reference scenario and overrides parts of it, or
//! spells out the whole experiment:
//!
//! ```json
//! {
//!   "scenario": "example2",
//!   "trials": 200,
//!   "algorithms": [{ "algorithm": "lad" }, { "algorithm": "rza_lad", "epsilon": 0.1 }],
//!   "master_seed": 7
//! }
//! ```
//!
//! Algorithm entries that omit `mu`, `rho` or `epsilon` take the reference
//! values. Unknown keys are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use zalad_core::scenarios::REFERENCE_TRIALS;
use zalad_core::{
    make_example, Algorithm, ConfiguredFilter, DivergencePolicy, ExampleId, FilterParams, InputKind, InputSpec,
    NoiseSpec, Phase, ScenarioConfig, SystemTrajectory,
};

pub const DEFAULT_OUTPUT_DIR: &str = "out";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed config at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid `{field}`: {reason}")]
    Invalid { field: String, reason: String },
}

impl ConfigError {
    fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    fn from_core(prefix: &str, err: zalad_core::Error) -> Self {
        match err {
            zalad_core::Error::InvalidParameter { name, reason } => Self::invalid(format!("{prefix}{name}"), reason),
            other => Self::invalid(prefix.trim_end_matches('.'), other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseFile {
    pub start: usize,
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub kind: InputKind,
    #[serde(default = "unit")]
    pub variance: f64,
    #[serde(default)]
    pub ar_coefficient: f64,
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmFile {
    pub algorithm: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

/// On-disk form of a run. Every field is optional; see [`RunConfigFile::resolve`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ExampleId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<PhaseFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithms: Option<Vec<AlgorithmFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub history_stride: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergence: Option<DivergencePolicy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallelism: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub scenario: Option<ExampleId>,
    pub master_seed: Option<u64>,
    pub trials: Option<usize>,
    pub parallelism: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

/// A fully validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    pub master_seed: u64,
    pub parallelism: usize,
    pub output_dir: PathBuf,
}

pub fn default_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Parses JSON text into the raw file form.
pub fn parse_file_text(text: &str) -> Result<RunConfigFile, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parses and validates JSON config text.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_file_text(text)?.resolve()
}

pub fn read_config_file(path: &Path) -> Result<RunConfigFile, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_file_text(&text)
}

impl RunConfigFile {
    pub fn apply(&mut self, overrides: &Overrides) {
        if overrides.scenario.is_some() {
            self.scenario = overrides.scenario;
        }
        if overrides.master_seed.is_some() {
            self.master_seed = overrides.master_seed;
        }
        if overrides.trials.is_some() {
            self.trials = overrides.trials;
        }
        if overrides.parallelism.is_some() {
            self.parallelism = overrides.parallelism;
        }
        if overrides.output_dir.is_some() {
            self.output_dir.clone_from(&overrides.output_dir);
        }
    }

    /// Fills defaults and checks every parameter against its invariants.
    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let base = self.scenario.map(make_example);

        let trajectory = match (&self.phases, base.as_ref()) {
            (Some(phases), _) => {
                let total = self
                    .total_iterations
                    .ok_or_else(|| ConfigError::invalid("total_iterations", "required when `phases` is given"))?;
                let taps = phases.first().map_or(0, |p| p.coefficients.len());
                let phases = phases
                    .iter()
                    .map(|p| Phase {
                        start: p.start,
                        coefficients: p.coefficients.clone(),
                    })
                    .collect();
                SystemTrajectory::new(taps, phases, total).map_err(|e| ConfigError::from_core("", e))?
            }
            (None, Some(base)) => match self.total_iterations {
                Some(total) => SystemTrajectory::new(base.taps(), base.trajectory.phases().to_vec(), total)
                    .map_err(|e| ConfigError::from_core("", e))?,
                None => base.trajectory.clone(),
            },
            (None, None) => return Err(ConfigError::invalid("phases", "required when no `scenario` is given")),
        };

        let input = match (&self.input, base.as_ref()) {
            (Some(i), _) => {
                InputSpec::new(i.kind, i.variance, i.ar_coefficient).map_err(|e| ConfigError::from_core("input.", e))?
            }
            (None, Some(base)) => base.input,
            (None, None) => return Err(ConfigError::invalid("input", "required when no `scenario` is given")),
        };

        let noise = match (self.noise, base.as_ref()) {
            (Some(n), _) => n,
            (None, Some(base)) => base.noise,
            (None, None) => return Err(ConfigError::invalid("noise", "required when no `scenario` is given")),
        };
        noise
            .resolve(input.stationary_power())
            .map_err(|e| ConfigError::from_core("noise.", e))?;

        let filters = match (&self.algorithms, base.as_ref()) {
            (Some(list), _) => list
                .iter()
                .enumerate()
                .map(|(i, a)| resolve_algorithm(i, a))
                .collect::<Result<Vec<_>, _>>()?,
            (None, Some(base)) => base.filters.clone(),
            (None, None) => {
                return Err(ConfigError::invalid(
                    "algorithms",
                    "required when no `scenario` is given",
                ))
            }
        };

        let name = self
            .name
            .clone()
            .or_else(|| base.as_ref().map(|b| b.name.clone()))
            .unwrap_or_else(|| "custom".to_owned());

        let scenario = ScenarioConfig {
            name,
            trajectory,
            input,
            noise,
            trials: self.trials.unwrap_or(REFERENCE_TRIALS),
            filters,
            history_stride: self.history_stride.unwrap_or(1),
            divergence: self.divergence.unwrap_or_default(),
        };
        scenario.validate().map_err(|e| ConfigError::from_core("", e))?;

        let parallelism = self.parallelism.unwrap_or_else(default_parallelism);
        if parallelism == 0 {
            return Err(ConfigError::invalid("parallelism", "must be at least 1"));
        }

        Ok(RunConfig {
            scenario,
            master_seed: self.master_seed.unwrap_or(0),
            parallelism,
            output_dir: self
                .output_dir
                .clone()
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
        })
    }

    /// Fully explicit file form of a resolved run; resolving it again yields
    /// the same run.
    pub fn echo(run: &RunConfig) -> Self {
        let s = &run.scenario;
        RunConfigFile {
            scenario: None,
            name: Some(s.name.clone()),
            phases: Some(
                s.trajectory
                    .phases()
                    .iter()
                    .map(|p| PhaseFile {
                        start: p.start,
                        coefficients: p.coefficients.clone(),
                    })
                    .collect(),
            ),
            total_iterations: Some(s.total_iterations()),
            input: Some(InputFile {
                kind: s.input.kind(),
                variance: s.input.variance(),
                ar_coefficient: s.input.ar_coefficient(),
            }),
            noise: Some(s.noise),
            trials: Some(s.trials),
            algorithms: Some(
                s.filters
                    .iter()
                    .map(|f| AlgorithmFile {
                        algorithm: f.params.algorithm().name().to_owned(),
                        label: Some(f.label.clone()),
                        mu: Some(f.params.mu()),
                        rho: Some(f.params.rho()),
                        epsilon: Some(f.params.epsilon()),
                    })
                    .collect(),
            ),
            history_stride: Some(s.history_stride),
            divergence: Some(s.divergence),
            master_seed: Some(run.master_seed),
            parallelism: Some(run.parallelism),
            output_dir: Some(run.output_dir.clone()),
        }
    }
}

fn resolve_algorithm(index: usize, entry: &AlgorithmFile) -> Result<ConfiguredFilter, ConfigError> {
    let prefix = format!("algorithms[{index}].");
    let algorithm: Algorithm = entry
        .algorithm
        .parse()
        .map_err(|e: zalad_core::Error| ConfigError::invalid(format!("{prefix}algorithm"), e.to_string()))?;
    let reference = FilterParams::reference(algorithm);
    let params = FilterParams::new(
        algorithm,
        entry.mu.unwrap_or(reference.mu()),
        entry.rho.unwrap_or(reference.rho()),
        entry.epsilon.unwrap_or(reference.epsilon()),
    )
    .map_err(|e| ConfigError::from_core(&prefix, e))?;
    let label = entry.label.clone().unwrap_or_else(|| algorithm.name().to_owned());
    Ok(ConfiguredFilter::new(label, params))
}
