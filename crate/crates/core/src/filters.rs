//! Online adaptive FIR filters.
//!
//! Six stochastic-gradient recursions share one weight-update skeleton:
//!
//! ```text
//! y(n)     = w(n)ᵀ x(n)
//! e(n)     = d(n) - y(n)
//! w(n + 1) = w(n) + μ · φ(e(n)) · x(n) - ρ · a(w(n))
//! ```
//!
//! where `φ(e) = sgn(e)` for the least-absolute-deviation (LAD) family and
//! `φ(e) = e` for the LMS family, and the zero attractor `a` is one of
//!
//! * none (plain LAD / LMS),
//! * `sgn(w)` element-wise (ZA, the subgradient of an l1 penalty),
//! * `sgn(w) / (1 + ε|w|)` element-wise (RZA, the gradient of a log-sum penalty).
//!
//! Both the error term and the attractor are evaluated at `w(n)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, invalid, Error, Result};

/// Step size shared by all six algorithms in the reference experiments.
pub const DEFAULT_MU: f64 = 5e-3;
/// Zero-attractor gain of the l1 variants.
pub const DEFAULT_RHO_ZA: f64 = 1.5e-4;
/// Zero-attractor gain of the reweighted variants.
pub const DEFAULT_RHO_RZA: f64 = 1.5e-3;
/// Reweighting constant of the reweighted variants.
pub const DEFAULT_EPSILON: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Lad,
    ZaLad,
    RzaLad,
    Lms,
    ZaLms,
    RzaLms,
}

/// Shape of the zero-attractor term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attractor {
    None,
    L1,
    Reweighted,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Lad,
        Algorithm::ZaLad,
        Algorithm::RzaLad,
        Algorithm::Lms,
        Algorithm::ZaLms,
        Algorithm::RzaLms,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            Algorithm::Lad => "lad",
            Algorithm::ZaLad => "za_lad",
            Algorithm::RzaLad => "rza_lad",
            Algorithm::Lms => "lms",
            Algorithm::ZaLms => "za_lms",
            Algorithm::RzaLms => "rza_lms",
        }
    }

    /// True for the sign-error (least absolute deviation) recursions.
    pub const fn is_lad_family(self) -> bool {
        matches!(self, Algorithm::Lad | Algorithm::ZaLad | Algorithm::RzaLad)
    }

    pub const fn attractor(self) -> Attractor {
        match self {
            Algorithm::Lad | Algorithm::Lms => Attractor::None,
            Algorithm::ZaLad | Algorithm::ZaLms => Attractor::L1,
            Algorithm::RzaLad | Algorithm::RzaLms => Attractor::Reweighted,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.trim().to_ascii_lowercase().replace('-', "_");
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == normalized)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm `{s}`")))
    }
}

/// Parameters of one filter instance.
///
/// `rho` is the combined attractor gain (step size times regularization
/// weight, times `epsilon` for the reweighted forms). `epsilon` is validated
/// for every algorithm but only read by the reweighted ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FilterParams {
    algorithm: Algorithm,
    mu: f64,
    rho: f64,
    epsilon: f64,
}

impl FilterParams {
    pub fn new(algorithm: Algorithm, mu: f64, rho: f64, epsilon: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(invalid("mu", format!("must be finite and > 0, got {mu}")));
        }
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(invalid("rho", format!("must be finite and >= 0, got {rho}")));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(invalid("epsilon", format!("must be finite and > 0, got {epsilon}")));
        }
        Ok(Self {
            algorithm,
            mu,
            rho,
            epsilon,
        })
    }

    /// Reference parameters: μ = 5e-3 everywhere, ρ = 1.5e-4 for the l1
    /// attractors, ρ = 1.5e-3 and ε = 1e-2 for the reweighted ones.
    pub fn reference(algorithm: Algorithm) -> Self {
        let rho = match algorithm.attractor() {
            Attractor::None => 0.0,
            Attractor::L1 => DEFAULT_RHO_ZA,
            Attractor::Reweighted => DEFAULT_RHO_RZA,
        };
        Self {
            algorithm,
            mu: DEFAULT_MU,
            rho,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn with_rho(self, rho: f64) -> Result<Self> {
        Self::new(self.algorithm, self.mu, rho, self.epsilon)
    }

    pub fn with_epsilon(self, epsilon: f64) -> Result<Self> {
        Self::new(self.algorithm, self.mu, self.rho, epsilon)
    }
}

/// Filter output and a-priori error of one adaptation step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub output: f64,
    pub error: f64,
}

/// Sign function with `sgn(0) = 0`.
pub fn sgn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    Ok(sign(x))
}

// Unchecked variant for the hot loop; NaN maps to 0 and is left to propagate
// through the weights.
#[inline]
fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[inline]
fn reweight(w: f64, epsilon: f64) -> f64 {
    sign(w) / (1.0 + epsilon * w.abs())
}

/// Element-wise `sgn(w_m) / (1 + ε|w_m|)`.
pub fn reweight_vector(weights: &[f64], epsilon: f64) -> Result<Vec<f64>> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(invalid("epsilon", format!("must be finite and > 0, got {epsilon}")));
    }
    Ok(weights.iter().map(|&w| reweight(w, epsilon)).collect())
}

/// Live tap weights of one adaptive filter.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterState {
    weights: Vec<f64>,
    iteration: u64,
}

impl FilterState {
    /// Zero-initialized filter with `taps` coefficients.
    pub fn new(taps: usize) -> Result<Self> {
        if taps == 0 {
            return Err(invalid("taps", "must be at least 1"));
        }
        Ok(Self {
            weights: vec![0.0; taps],
            iteration: 0,
        })
    }

    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(invalid("taps", "must be at least 1"));
        }
        Ok(Self { weights, iteration: 0 })
    }

    pub fn taps(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    /// Inner product of the weights with `regressor`.
    pub fn predict(&self, regressor: &[f64]) -> Result<f64> {
        check_len(self.taps(), regressor.len())?;
        Ok(dot(&self.weights, regressor))
    }

    pub fn step_lad(&mut self, params: &FilterParams, regressor: &[f64], desired: f64) -> Result<StepRecord> {
        self.step_checked(Algorithm::Lad, params, regressor, desired)
    }

    pub fn step_za_lad(&mut self, params: &FilterParams, regressor: &[f64], desired: f64) -> Result<StepRecord> {
        self.step_checked(Algorithm::ZaLad, params, regressor, desired)
    }

    pub fn step_rza_lad(&mut self, params: &FilterParams, regressor: &[f64], desired: f64) -> Result<StepRecord> {
        self.step_checked(Algorithm::RzaLad, params, regressor, desired)
    }

    pub fn step_lms(&mut self, params: &FilterParams, regressor: &[f64], desired: f64) -> Result<StepRecord> {
        self.step_checked(Algorithm::Lms, params, regressor, desired)
    }

    pub fn step_za_lms(&mut self, params: &FilterParams, regressor: &[f64], desired: f64) -> Result<StepRecord> {
        self.step_checked(Algorithm::ZaLms, params, regressor, desired)
    }

    pub fn step_rza_lms(&mut self, params: &FilterParams, regressor: &[f64], desired: f64) -> Result<StepRecord> {
        self.step_checked(Algorithm::RzaLms, params, regressor, desired)
    }

    /// Runs one adaptation step with the recursion selected by `params`.
    pub fn step(&mut self, params: &FilterParams, regressor: &[f64], desired: f64) -> Result<StepRecord> {
        check_len(self.taps(), regressor.len())?;
        Ok(self.update(params, regressor, desired))
    }

    fn step_checked(
        &mut self,
        expected: Algorithm,
        params: &FilterParams,
        regressor: &[f64],
        desired: f64,
    ) -> Result<StepRecord> {
        if params.algorithm != expected {
            return Err(Error::InvalidArgument(format!(
                "parameters are for `{}`, expected `{expected}`",
                params.algorithm
            )));
        }
        self.step(params, regressor, desired)
    }

    fn update(&mut self, params: &FilterParams, regressor: &[f64], desired: f64) -> StepRecord {
        let output = dot(&self.weights, regressor);
        let error = desired - output;
        let algorithm = params.algorithm;
        let gain = if algorithm.is_lad_family() {
            params.mu * sign(error)
        } else {
            params.mu * error
        };
        let rho = params.rho;
        let eps = params.epsilon;
        match algorithm.attractor() {
            Attractor::None => {
                for (w, &x) in self.weights.iter_mut().zip(regressor) {
                    *w += gain * x;
                }
            }
            Attractor::L1 => {
                for (w, &x) in self.weights.iter_mut().zip(regressor) {
                    *w = *w + gain * x - rho * sign(*w);
                }
            }
            Attractor::Reweighted => {
                for (w, &x) in self.weights.iter_mut().zip(regressor) {
                    *w = *w + gain * x - rho * reweight(*w, eps);
                }
            }
        }
        self.iteration += 1;
        StepRecord { output, error }
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Instantaneous penalized cost functions and their (sub)gradients with
/// respect to the weight vector.
///
/// These are the objectives the LAD recursions descend: one gradient step of
/// size μ on [`za_lad_gradient`] with `alpha = ρ / μ` reproduces the ZA-LAD
/// update, and on [`rza_lad_gradient`] with `alpha = ρ / (μ ε)` the RZA-LAD
/// update.
pub mod cost {
    use super::{dot, reweight, sign};

    /// `|d - wᵀx| + alpha · ||w||₁`
    pub fn za_lad_cost(weights: &[f64], regressor: &[f64], desired: f64, alpha: f64) -> f64 {
        let e = desired - dot(weights, regressor);
        e.abs() + alpha * weights.iter().map(|w| w.abs()).sum::<f64>()
    }

    /// `-sgn(e)·x + alpha · sgn(w)`
    pub fn za_lad_gradient(weights: &[f64], regressor: &[f64], desired: f64, alpha: f64) -> Vec<f64> {
        let s = sign(desired - dot(weights, regressor));
        weights
            .iter()
            .zip(regressor)
            .map(|(&w, &x)| -s * x + alpha * sign(w))
            .collect()
    }

    /// `|d - wᵀx| + alpha · Σ log(1 + ε|w_m|)`
    pub fn rza_lad_cost(weights: &[f64], regressor: &[f64], desired: f64, alpha: f64, epsilon: f64) -> f64 {
        let e = desired - dot(weights, regressor);
        e.abs() + alpha * weights.iter().map(|w| (epsilon * w.abs()).ln_1p()).sum::<f64>()
    }

    /// `-sgn(e)·x + alpha · ε · g(w)` with `g_m = sgn(w_m) / (1 + ε|w_m|)`
    pub fn rza_lad_gradient(weights: &[f64], regressor: &[f64], desired: f64, alpha: f64, epsilon: f64) -> Vec<f64> {
        let s = sign(desired - dot(weights, regressor));
        weights
            .iter()
            .zip(regressor)
            .map(|(&w, &x)| -s * x + alpha * epsilon * reweight(w, epsilon))
            .collect()
    }
}
