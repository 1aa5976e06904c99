//! Seeded Monte-Carlo runner.
//!
//! Every trial owns one ChaCha8 stream: the master seed keys the generator
//! (via `seed_from_u64`) and the trial index selects the 64-bit stream
//! number, so distinct `(master_seed, trial_index)` pairs never share
//! keystream. Within a trial the draws per iteration are, in order, the input
//! innovation and the measurement noise; all filters are stepped on the same
//! `(regressor, desired)` pair and never touch the stream.
//!
//! Per-iteration sums over trials are reduced in trial-index order, so the
//! output does not depend on the worker count.

use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::{dot, FilterState};
use crate::metrics::{squared_deviation, MsdSeries, WeightHistory};
use crate::scenarios::ScenarioConfig;
use crate::signals::{InputProcess, RegressorWindow};

/// Identifies the random stream of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TrialSeed {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl TrialSeed {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        Self {
            master_seed,
            trial_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.trial_index);
        rng
    }
}

/// How trials whose deviation becomes non-finite enter the average.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergencePolicy {
    /// Drop the trial from that filter's average.
    #[default]
    Exclude,
    /// Replace every non-finite per-iteration deviation by this value.
    Cap(f64),
}

/// Output of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutput {
    /// Weight histories at the configured stride, one per filter.
    pub histories: Vec<WeightHistory>,
    /// `||w(n) - w_o(n)||²` at every iteration, one row per filter.
    pub squared_deviation: Vec<Vec<f64>>,
}

/// All filters' MSD curves for one experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub config: ScenarioConfig,
    pub master_seed: u64,
    pub series: Vec<MsdSeries>,
    pub wall_time: Duration,
}

impl ExperimentResult {
    pub fn series(&self, label: &str) -> Option<&MsdSeries> {
        self.series.iter().find(|s| s.label == label)
    }

    /// Fraction of trials flagged as diverged for `label`.
    pub fn diverged_fraction(&self, label: &str) -> Option<f64> {
        self.series(label)
            .map(|s| s.diverged as f64 / self.config.trials as f64)
    }
}

fn simulate<R, F>(config: &ScenarioConfig, rng: &mut R, mut on_step: F) -> Result<()>
where
    R: Rng + ?Sized,
    F: FnMut(usize, usize, &FilterState, f64),
{
    let taps = config.taps();
    let noise = config.noise.resolve(config.input.stationary_power())?;
    let mut input = InputProcess::new(config.input);
    let mut window = RegressorWindow::new(taps)?;
    let mut filters = config
        .filters
        .iter()
        .map(|_| FilterState::new(taps))
        .collect::<Result<Vec<_>>>()?;

    let trajectory = &config.trajectory;
    for (k, phase) in trajectory.phases().iter().enumerate() {
        let truth = phase.coefficients.as_slice();
        for n in trajectory.phase_range(k) {
            window.push(input.next(rng));
            let regressor = window.as_slice();
            let desired = dot(truth, regressor) + noise.sample(rng);
            for (i, (state, spec)) in filters.iter_mut().zip(&config.filters).enumerate() {
                state.step(&spec.params, regressor, desired)?;
                on_step(i, n, state, squared_deviation(state.weights(), truth));
            }
        }
    }
    Ok(())
}

/// Runs one trial on the stream of `seed`.
pub fn run_trial(config: &ScenarioConfig, seed: TrialSeed) -> Result<TrialOutput> {
    run_trial_with_rng(config, &mut seed.rng())
}

/// Runs one trial on an arbitrary random stream.
pub fn run_trial_with_rng<R: Rng + ?Sized>(config: &ScenarioConfig, rng: &mut R) -> Result<TrialOutput> {
    config.validate()?;
    let total = config.total_iterations();
    let stride = config.history_stride;
    let mut histories: Vec<WeightHistory> = config
        .filters
        .iter()
        .map(|f| WeightHistory {
            label: f.label.clone(),
            algorithm: f.params.algorithm(),
            stride,
            weights: Vec::with_capacity(total.div_ceil(stride)),
        })
        .collect();
    let mut deviations = vec![vec![0.0; total]; config.filters.len()];
    simulate(config, rng, |i, n, state, dev| {
        if n % stride == 0 {
            histories[i].weights.push(state.weights().to_vec());
        }
        deviations[i][n] = dev;
    })?;
    Ok(TrialOutput {
        histories,
        squared_deviation: deviations,
    })
}

fn trial_deviations(config: &ScenarioConfig, seed: TrialSeed) -> Result<Vec<Vec<f64>>> {
    let total = config.total_iterations();
    let mut deviations = vec![vec![0.0; total]; config.filters.len()];
    simulate(config, &mut seed.rng(), |i, n, _, dev| deviations[i][n] = dev)?;
    Ok(deviations)
}

struct Accumulator {
    sums: Vec<f64>,
    contributing: usize,
    diverged: usize,
}

impl Accumulator {
    fn add(&mut self, row: &[f64], policy: DivergencePolicy) {
        let finite = row.iter().all(|v| v.is_finite());
        if !finite {
            self.diverged += 1;
        }
        match (finite, policy) {
            (true, _) => {
                self.contributing += 1;
                for (s, v) in self.sums.iter_mut().zip(row) {
                    *s += v;
                }
            }
            (false, DivergencePolicy::Exclude) => {}
            (false, DivergencePolicy::Cap(cap)) => {
                self.contributing += 1;
                for (s, &v) in self.sums.iter_mut().zip(row) {
                    *s += if v.is_finite() { v } else { cap };
                }
            }
        }
    }
}

/// Runs `config.trials` independent trials on up to `parallelism` worker
/// threads and averages the squared deviations per iteration.
pub fn run_experiment(config: &ScenarioConfig, master_seed: u64, parallelism: usize) -> Result<ExperimentResult> {
    config.validate()?;
    if parallelism == 0 {
        return Err(Error::InvalidParameter {
            name: "parallelism",
            reason: "must be at least 1".into(),
        });
    }
    let started = Instant::now();
    let total = config.total_iterations();
    let mut acc: Vec<Accumulator> = config
        .filters
        .iter()
        .map(|_| Accumulator {
            sums: vec![0.0; total],
            contributing: 0,
            diverged: 0,
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;

    // Slots are filled in parallel, then folded strictly in trial order.
    let block = 4 * parallelism;
    let mut first = 0;
    while first < config.trials {
        let last = (first + block).min(config.trials);
        let slots: Vec<Result<Vec<Vec<f64>>>> = pool.install(|| {
            (first..last)
                .into_par_iter()
                .map(|t| trial_deviations(config, TrialSeed::new(master_seed, t as u64)))
                .collect()
        });
        for slot in slots {
            for (a, row) in acc.iter_mut().zip(slot?) {
                a.add(&row, config.divergence);
            }
        }
        first = last;
    }

    let series = config
        .filters
        .iter()
        .zip(acc)
        .map(|(f, a)| {
            let k = a.contributing as f64;
            MsdSeries {
                label: f.label.clone(),
                algorithm: f.params.algorithm(),
                values: a.sums.into_iter().map(|s| s / k).collect(),
                trials: a.contributing,
                diverged: a.diverged,
            }
        })
        .collect();

    Ok(ExperimentResult {
        config: config.clone(),
        master_seed,
        series,
        wall_time: started.elapsed(),
    })
}
