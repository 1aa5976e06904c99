//! Piecewise-constant true systems and the three reference experiments.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::filters::{Algorithm, FilterParams};
use crate::harness::DivergencePolicy;
use crate::noise::NoiseSpec;
use crate::signals::InputSpec;

/// Tap count of the reference systems.
pub const REFERENCE_TAPS: usize = 16;
/// Independent trials per curve in the reference experiments.
pub const REFERENCE_TRIALS: usize = 500;
/// Reweighting constants swept in the first experiment.
pub const EPSILON_SWEEP: [f64; 5] = [0.001, 0.01, 0.1, 1.0, 10.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Phase {
    pub start: usize,
    pub coefficients: Vec<f64>,
}

/// True coefficient vector as a function of the iteration index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemTrajectory {
    taps: usize,
    phases: Vec<Phase>,
    total_iterations: usize,
}

impl SystemTrajectory {
    pub fn new(taps: usize, phases: Vec<Phase>, total_iterations: usize) -> Result<Self> {
        if taps == 0 {
            return Err(invalid("taps", "must be at least 1"));
        }
        let Some(first) = phases.first() else {
            return Err(invalid("phases", "at least one phase is required"));
        };
        if first.start != 0 {
            return Err(invalid("phases", "the first phase must start at iteration 0"));
        }
        if phases.windows(2).any(|w| w[1].start <= w[0].start) {
            return Err(invalid("phases", "start iterations must be strictly increasing"));
        }
        for (k, phase) in phases.iter().enumerate() {
            if phase.coefficients.len() != taps {
                return Err(invalid(
                    "phases",
                    format!(
                        "phase {k} has {} coefficients, expected {taps}",
                        phase.coefficients.len()
                    ),
                ));
            }
            if phase.coefficients.iter().any(|c| !c.is_finite()) {
                return Err(invalid("phases", format!("phase {k} has non-finite coefficients")));
            }
        }
        let last_start = phases.last().map_or(0, |p| p.start);
        if total_iterations <= last_start {
            return Err(invalid(
                "total_iterations",
                format!("must exceed the last phase start {last_start}, got {total_iterations}"),
            ));
        }
        Ok(Self {
            taps,
            phases,
            total_iterations,
        })
    }

    /// Time-invariant system.
    pub fn constant(coefficients: Vec<f64>, total_iterations: usize) -> Result<Self> {
        let taps = coefficients.len();
        Self::new(taps, vec![Phase { start: 0, coefficients }], total_iterations)
    }

    pub fn taps(&self) -> usize {
        self.taps
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn total_iterations(&self) -> usize {
        self.total_iterations
    }

    pub fn phase_index_at(&self, n: usize) -> Result<usize> {
        if n >= self.total_iterations {
            return Err(Error::OutOfRange {
                index: n,
                total: self.total_iterations,
            });
        }
        Ok(self.phases.partition_point(|p| p.start <= n) - 1)
    }

    /// Coefficients of the last phase starting at or before `n`.
    pub fn true_weights_at(&self, n: usize) -> Result<&[f64]> {
        let k = self.phase_index_at(n)?;
        Ok(&self.phases[k].coefficients)
    }

    /// Iteration range covered by phase `k`.
    pub fn phase_range(&self, k: usize) -> Range<usize> {
        let start = self.phases[k].start;
        let end = self.phases.get(k + 1).map_or(self.total_iterations, |p| p.start);
        start..end
    }
}

/// One filter of an experiment and the name it is reported under.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfiguredFilter {
    pub label: String,
    pub params: FilterParams,
}

impl ConfiguredFilter {
    pub fn new(label: impl Into<String>, params: FilterParams) -> Self {
        Self {
            label: label.into(),
            params,
        }
    }

    /// Reference parameters, labelled with the algorithm tag.
    pub fn reference(algorithm: Algorithm) -> Self {
        Self::new(algorithm.name(), FilterParams::reference(algorithm))
    }
}

/// Everything needed to run one Monte-Carlo experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub trajectory: SystemTrajectory,
    pub input: InputSpec,
    pub noise: NoiseSpec,
    pub trials: usize,
    pub filters: Vec<ConfiguredFilter>,
    /// Stride at which per-trial weight histories are kept by
    /// [`run_trial`](crate::harness::run_trial). MSD is always evaluated at
    /// every iteration.
    pub history_stride: usize,
    pub divergence: DivergencePolicy,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        if self.filters.is_empty() {
            return Err(invalid("algorithms", "at least one algorithm is required"));
        }
        if self.history_stride == 0 {
            return Err(invalid("history_stride", "must be at least 1"));
        }
        for (i, f) in self.filters.iter().enumerate() {
            if f.label.is_empty() || f.label.contains([',', '\n', '\r', '"']) {
                return Err(invalid(
                    "label",
                    format!(
                        "label `{}` must be non-empty and free of commas, quotes and newlines",
                        f.label
                    ),
                ));
            }
            if self.filters[..i].iter().any(|g| g.label == f.label) {
                return Err(invalid("label", format!("duplicate label `{}`", f.label)));
            }
        }
        if let DivergencePolicy::Cap(cap) = self.divergence {
            if !(cap.is_finite() && cap >= 0.0) {
                return Err(invalid("divergence", format!("cap must be finite and >= 0, got {cap}")));
            }
        }
        self.noise.resolve(self.input.stationary_power())?;
        Ok(())
    }

    pub fn taps(&self) -> usize {
        self.trajectory.taps()
    }

    pub fn total_iterations(&self) -> usize {
        self.trajectory.total_iterations()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExampleId {
    #[serde(rename = "example1")]
    Ex1,
    #[serde(rename = "example2")]
    Ex2,
    #[serde(rename = "example3")]
    Ex3,
}

impl ExampleId {
    pub const fn name(self) -> &'static str {
        match self {
            ExampleId::Ex1 => "example1",
            ExampleId::Ex2 => "example2",
            ExampleId::Ex3 => "example3",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "example1" | "ex1" | "1" => Ok(ExampleId::Ex1),
            "example2" | "ex2" | "2" => Ok(ExampleId::Ex2),
            "example3" | "ex3" | "3" => Ok(ExampleId::Ex3),
            _ => Err(Error::InvalidArgument(format!("unknown scenario `{s}`"))),
        }
    }
}

/// 16 taps with tap 5 (1-based) set to one.
pub fn single_tap_system() -> Vec<f64> {
    let mut w = vec![0.0; REFERENCE_TAPS];
    w[4] = 1.0;
    w
}

/// Odd taps (1-based) set to one, even taps zero.
pub fn half_sparse_system() -> Vec<f64> {
    (0..REFERENCE_TAPS)
        .map(|m| if m % 2 == 0 { 1.0 } else { 0.0 })
        .collect()
}

/// Odd taps (1-based) one, even taps minus one.
pub fn dense_system() -> Vec<f64> {
    (0..REFERENCE_TAPS)
        .map(|m| if m % 2 == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// Three-phase sparse → half-sparse → dense schedule.
pub fn switching_trajectory(switches: [usize; 2], total_iterations: usize) -> Result<SystemTrajectory> {
    SystemTrajectory::new(
        REFERENCE_TAPS,
        vec![
            Phase {
                start: 0,
                coefficients: single_tap_system(),
            },
            Phase {
                start: switches[0],
                coefficients: half_sparse_system(),
            },
            Phase {
                start: switches[1],
                coefficients: dense_system(),
            },
        ],
        total_iterations,
    )
}

fn reference_noise() -> NoiseSpec {
    NoiseSpec::StableGsnr {
        alpha: 1.2,
        beta: 0.0,
        gsnr_db: 10.0,
    }
}

/// Reference configuration of one of the three experiments.
pub fn make_example(id: ExampleId) -> ScenarioConfig {
    let (trajectory, input, filters) = match id {
        ExampleId::Ex1 => {
            let mut filters = vec![
                ConfiguredFilter::reference(Algorithm::Lad),
                ConfiguredFilter::reference(Algorithm::ZaLad),
            ];
            for eps in EPSILON_SWEEP {
                let params = FilterParams::reference(Algorithm::RzaLad)
                    .with_epsilon(eps)
                    .expect("sweep values are positive");
                filters.push(ConfiguredFilter::new(format!("rza_lad_eps{eps}"), params));
            }
            (
                SystemTrajectory::constant(single_tap_system(), 3000).expect("valid trajectory"),
                InputSpec::white(1.0).expect("valid input"),
                filters,
            )
        }
        ExampleId::Ex2 => (
            switching_trajectory([3000, 6000], 9000).expect("valid trajectory"),
            InputSpec::white(1.0).expect("valid input"),
            Algorithm::ALL.map(ConfiguredFilter::reference).to_vec(),
        ),
        ExampleId::Ex3 => (
            switching_trajectory([20000, 40000], 60000).expect("valid trajectory"),
            InputSpec::ar1(0.8, 1.0).expect("valid input"),
            Algorithm::ALL.map(ConfiguredFilter::reference).to_vec(),
        ),
    };
    ScenarioConfig {
        name: id.name().to_owned(),
        trajectory,
        input,
        noise: reference_noise(),
        trials: REFERENCE_TRIALS,
        filters,
        history_stride: 1,
        divergence: DivergencePolicy::Exclude,
    }
}
