//! Mean square deviation between estimated and true coefficient vectors.

use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::filters::Algorithm;
use crate::scenarios::SystemTrajectory;

/// `||w - truth||²`
#[inline]
pub fn squared_deviation(weights: &[f64], truth: &[f64]) -> f64 {
    weights.iter().zip(truth).map(|(w, t)| (w - t) * (w - t)).sum()
}

/// Trial average of `||w_k - truth||²`.
pub fn msd<V: AsRef<[f64]>>(estimates: &[V], truth: &[f64]) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::InvalidArgument("msd needs at least one estimate".into()));
    }
    let mut sum = 0.0;
    for w in estimates {
        let w = w.as_ref();
        check_len(truth.len(), w.len())?;
        sum += squared_deviation(w, truth);
    }
    Ok(sum / estimates.len() as f64)
}

/// `10·log10(x)`; zero maps to negative infinity.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Weights of one filter in one trial, recorded every `stride` iterations
/// starting at iteration 0. Entry `i` holds the weights after the update at
/// iteration `i * stride`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightHistory {
    pub label: String,
    pub algorithm: Algorithm,
    pub stride: usize,
    pub weights: Vec<Vec<f64>>,
}

/// Per-iteration trial-averaged MSD of one filter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MsdSeries {
    pub label: String,
    pub algorithm: Algorithm,
    /// Linear MSD per iteration.
    pub values: Vec<f64>,
    /// Trials contributing to the average.
    pub trials: usize,
    /// Trials whose deviation became non-finite.
    pub diverged: usize,
}

impl MsdSeries {
    pub fn values_db(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(|&v| to_db(v))
    }

    /// Mean linear MSD over `range`.
    pub fn mean_over(&self, range: std::ops::Range<usize>) -> f64 {
        let slice = &self.values[range];
        slice.iter().sum::<f64>() / slice.len() as f64
    }
}

/// MSD curve of one filter from full-resolution per-trial weight histories.
pub fn msd_trajectory(histories: &[WeightHistory], trajectory: &SystemTrajectory) -> Result<MsdSeries> {
    let Some(first) = histories.first() else {
        return Err(Error::InvalidArgument("no weight histories given".into()));
    };
    let total = trajectory.total_iterations();
    for h in histories {
        if h.stride != 1 {
            return Err(Error::InvalidArgument(format!(
                "history `{}` has stride {}, MSD needs every iteration",
                h.label, h.stride
            )));
        }
        if h.label != first.label {
            return Err(Error::InvalidArgument(format!(
                "histories mix filters `{}` and `{}`",
                first.label, h.label
            )));
        }
        check_len(total, h.weights.len())?;
    }
    let mut values = Vec::with_capacity(total);
    let mut column: Vec<&[f64]> = Vec::with_capacity(histories.len());
    for n in 0..total {
        column.clear();
        column.extend(histories.iter().map(|h| h.weights[n].as_slice()));
        values.push(msd(&column, trajectory.true_weights_at(n)?)?);
    }
    Ok(MsdSeries {
        label: first.label.clone(),
        algorithm: first.algorithm,
        values,
        trials: histories.len(),
        diverged: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{make_example, ExampleId};

    #[test]
    fn msd_examples() {
        let truth = [0.5, -1.0, 2.0];
        assert_eq!(msd(&[truth, truth], &truth).unwrap(), 0.0);
        assert_eq!(msd(&[[1.5, -1.0, 2.0]], &truth).unwrap(), 1.0);
        let a = [1.5, -1.0, 2.0];
        let b = [0.5, 0.0, 2.0 + 2f64.sqrt()];
        assert!((msd(&[a, b], &truth).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn msd_errors() {
        let empty: [[f64; 2]; 0] = [];
        assert!(msd(&empty, &[0.0, 0.0]).is_err());
        assert!(matches!(
            msd(&[vec![0.0; 3]], &[0.0, 0.0]),
            Err(Error::DimensionMismatch { expected: 2, actual: 3 })
        ));
    }

    #[test]
    fn zero_estimator_on_switching_system() {
        let traj = make_example(ExampleId::Ex2).trajectory;
        let total = traj.total_iterations();
        let zero = |label: &str| WeightHistory {
            label: label.into(),
            algorithm: Algorithm::Lad,
            stride: 1,
            weights: vec![vec![0.0; 16]; total],
        };
        let series = msd_trajectory(&[zero("lad"), zero("lad")], &traj).unwrap();
        assert_eq!(series.trials, 2);
        for (n, &v) in series.values.iter().enumerate() {
            let expected = if n < 3000 {
                1.0
            } else if n < 6000 {
                8.0
            } else {
                16.0
            };
            assert_eq!(v, expected, "iteration {n}");
        }
        assert!(msd_trajectory(&[zero("lad"), zero("rza_lad")], &traj).is_err());
        let mut short = zero("lad");
        short.weights.pop();
        assert!(msd_trajectory(&[zero("lad"), short], &traj).is_err());
    }

    #[test]
    fn db_conversion() {
        assert_eq!(to_db(1.0), 0.0);
        assert_eq!(to_db(0.0), f64::NEG_INFINITY);
        assert!((to_db(0.01) + 20.0).abs() < 1e-12);
    }
}
