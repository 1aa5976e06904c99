//! Input processes and the tapped delay line.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::noise::standard_normal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    WhiteGaussian,
    Ar1,
}

/// White Gaussian input, or a first-order autoregression driven by white
/// Gaussian noise of the given variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InputSpec {
    kind: InputKind,
    variance: f64,
    ar_coefficient: f64,
}

impl InputSpec {
    pub fn new(kind: InputKind, variance: f64, ar_coefficient: f64) -> Result<Self> {
        if !(variance.is_finite() && variance > 0.0) {
            return Err(invalid("variance", format!("must be finite and > 0, got {variance}")));
        }
        if !(ar_coefficient.is_finite() && ar_coefficient.abs() < 1.0) {
            return Err(invalid(
                "ar_coefficient",
                format!("must satisfy |a| < 1, got {ar_coefficient}"),
            ));
        }
        Ok(Self {
            kind,
            variance,
            ar_coefficient: if kind == InputKind::Ar1 { ar_coefficient } else { 0.0 },
        })
    }

    pub fn white(variance: f64) -> Result<Self> {
        Self::new(InputKind::WhiteGaussian, variance, 0.0)
    }

    pub fn ar1(coefficient: f64, variance: f64) -> Result<Self> {
        Self::new(InputKind::Ar1, variance, coefficient)
    }

    pub fn kind(&self) -> InputKind {
        self.kind
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn ar_coefficient(&self) -> f64 {
        self.ar_coefficient
    }

    /// Stationary power of the process, `variance / (1 - a²)` for AR(1).
    pub fn stationary_power(&self) -> f64 {
        match self.kind {
            InputKind::WhiteGaussian => self.variance,
            InputKind::Ar1 => self.variance / (1.0 - self.ar_coefficient * self.ar_coefficient),
        }
    }
}

/// Next input sample given the previous one (0 before the first sample).
/// Consumes one Gaussian draw for either kind.
pub fn next_input<R: Rng + ?Sized>(spec: &InputSpec, prev: f64, rng: &mut R) -> f64 {
    let innovation = spec.variance.sqrt() * standard_normal(rng);
    match spec.kind {
        InputKind::WhiteGaussian => innovation,
        InputKind::Ar1 => spec.ar_coefficient * prev + innovation,
    }
}

/// Stateful wrapper around [`next_input`].
#[derive(Debug, Clone)]
pub struct InputProcess {
    spec: InputSpec,
    prev: f64,
}

impl InputProcess {
    pub fn new(spec: InputSpec) -> Self {
        Self { spec, prev: 0.0 }
    }

    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        self.prev = next_input(&self.spec, self.prev, rng);
        self.prev
    }
}

/// Most-recent-first window of the last `M` input samples.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressorWindow {
    buffer: Vec<f64>,
}

impl RegressorWindow {
    pub fn new(taps: usize) -> Result<Self> {
        if taps == 0 {
            return Err(invalid("taps", "must be at least 1"));
        }
        Ok(Self {
            buffer: vec![0.0; taps],
        })
    }

    pub fn push(&mut self, sample: f64) {
        let n = self.buffer.len();
        self.buffer.copy_within(0..n - 1, 1);
        self.buffer[0] = sample;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.buffer
    }

    pub fn len(&self) -> usize {
        self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buffer.is_empty()
    }
}
