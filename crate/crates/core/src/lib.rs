//! Sparse system identification with sign-error adaptive filters.
//!
//! The crate provides the LAD, ZA-LAD and RZA-LAD recursions with their LMS
//! counterparts ([`filters`]), symmetric α-stable measurement noise
//! ([`noise`]), white and AR(1) inputs ([`signals`]), piecewise-constant true
//! systems ([`scenarios`]), mean square deviation ([`metrics`]) and a seeded,
//! parallel Monte-Carlo runner ([`harness`]).

pub mod error;
pub mod filters;
pub mod harness;
pub mod metrics;
pub mod noise;
pub mod scenarios;
pub mod signals;
pub mod stats;

pub use error::{Error, Result};
pub use filters::{reweight_vector, sgn, Algorithm, Attractor, FilterParams, FilterState, StepRecord};
pub use harness::{
    run_experiment, run_trial, run_trial_with_rng, DivergencePolicy, ExperimentResult, TrialOutput, TrialSeed,
};
pub use metrics::{msd, msd_trajectory, to_db, MsdSeries, WeightHistory};
pub use noise::{calibrate_scale, sample_gaussian, sample_stable, GsnrSpec, NoiseParams, NoiseSource, NoiseSpec};
pub use scenarios::{make_example, ConfiguredFilter, ExampleId, Phase, ScenarioConfig, SystemTrajectory};
pub use signals::{next_input, InputKind, InputProcess, InputSpec, RegressorWindow};
