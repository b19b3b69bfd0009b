use std::f64::consts::PI;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::target::TargetSpec;
use crate::error::{Error, Result};
use crate::rng;

/// Affine map of `[min, max]` onto `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub min: f64,
    pub max: f64,
}

impl MinMaxScaler {
    pub fn fit(values: &[f64]) -> Result<Self> {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::Scaling(
                "cannot scale empty or non-finite data".into(),
            ));
        }
        if max <= min {
            return Err(Error::Scaling(format!(
                "raw targets are constant ({min}); min-max scaling is undefined"
            )));
        }
        Ok(MinMaxScaler { min, max })
    }

    pub fn transform(&self, v: f64) -> f64 {
        if v == self.max {
            return 1.0;
        }
        2.0 * (v - self.min) / (self.max - self.min) - 1.0
    }

    pub fn inverse(&self, s: f64) -> f64 {
        self.min + (s + 1.0) * 0.5 * (self.max - self.min)
    }
}

/// `n` evenly spaced points on `[-pi, pi]`, endpoints included exactly.
pub fn linspace_pi(n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![-PI],
        _ => {
            let step = 2.0 * PI / (n - 1) as f64;
            let mut xs: Vec<f64> = (0..n).map(|j| -PI + step * j as f64).collect();
            xs[n - 1] = PI;
            xs
        }
    }
}

/// Inputs on `[-pi, pi]` and min-max scaled targets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub scaler: MinMaxScaler,
}

impl Dataset {
    /// Build from raw targets; the scaler is fit on all of `raw`.
    pub fn from_raw(xs: Vec<f64>, raw: &[f64]) -> Result<Self> {
        if xs.len() != raw.len() {
            return Err(Error::Dimension(format!(
                "{} inputs but {} targets",
                xs.len(),
                raw.len()
            )));
        }
        let scaler = MinMaxScaler::fit(raw)?;
        let ys = raw.iter().map(|&v| scaler.transform(v)).collect();
        Ok(Dataset { xs, ys, scaler })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn raw_targets(&self) -> Vec<f64> {
        self.ys.iter().map(|&s| self.scaler.inverse(s)).collect()
    }

    pub fn select(&self, indices: &[usize]) -> Samples {
        Samples {
            xs: indices.iter().map(|&i| self.xs[i]).collect(),
            ys: indices.iter().map(|&i| self.ys[i]).collect(),
        }
    }
}

/// A plain list of `(x, y)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Samples {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl Samples {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// Sample `spec` at `n` points of [`linspace_pi`] and scale to `[-1, 1]`.
///
/// Note the scaler sees the whole grid before any train/test split, so test
/// targets influence the scaling.
pub fn sample_dataset(spec: &TargetSpec, n: usize) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::Config(format!("need at least 2 samples, got {n}")));
    }
    let xs = linspace_pi(n);
    let raw: Vec<f64> = xs.iter().map(|&x| spec.evaluate(x)).collect();
    Dataset::from_raw(xs, &raw)
}

/// Disjoint train/test index sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitDataset {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub ratio: f64,
}

impl SplitDataset {
    pub fn train_samples(&self, data: &Dataset) -> Samples {
        data.select(&self.train)
    }

    pub fn test_samples(&self, data: &Dataset) -> Samples {
        data.select(&self.test)
    }
}

/// Uniformly random permutation; the first `round(ratio * n)` indices train.
pub fn split(dataset: &Dataset, ratio: f64, seed: u64) -> Result<SplitDataset> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Config(format!("split ratio {ratio} not in (0, 1)")));
    }
    let n = dataset.len();
    let n_train = (ratio * n as f64).round() as usize;
    if n_train == 0 || n_train >= n {
        return Err(Error::Config(format!(
            "ratio {ratio} on {n} samples leaves one side of the split empty"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::stream(seed));
    let test = order.split_off(n_train);
    Ok(SplitDataset {
        train: order,
        test,
        ratio,
    })
}
