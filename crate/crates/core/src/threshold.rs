//! Reiss–Thomas choice of the number of upper order statistics.
//!
//! For every candidate `k` the estimator path `γ̂(1), ..., γ̂(k)` is compared
//! against its own median:
//!
//! ```text
//! criterion(k) = (1/k) Σ_{i=1..k} i^θ |γ̂(i) − median{γ̂(1), ..., γ̂(k)}|
//! ```
//!
//! and `k*` is the smallest minimizer.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::LossSample;
use crate::tail::TailMethod;

/// Tuning exponent that gave reasonable results in the reference simulations.
pub const DEFAULT_THETA: f64 = 0.3;

/// Smallest candidate `k`.
pub const DEFAULT_K_MIN: usize = 2;

/// Default upper end of the scan: `n - 1` up to `n = 5000`, `⌊n/2⌋` beyond.
pub fn default_k_max(n: usize) -> usize {
    if n <= 5000 {
        n - 1
    } else {
        n / 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSelection {
    pub k_star: usize,
    pub theta: f64,
    pub method: TailMethod,
    pub k_min: usize,
    pub k_max: usize,
    /// `criterion_values[k - k_min]` is the criterion at candidate `k`.
    pub criterion_values: Vec<f64>,
}

impl ThresholdSelection {
    pub fn criterion(&self, k: usize) -> Option<f64> {
        k.checked_sub(self.k_min)
            .and_then(|i| self.criterion_values.get(i))
            .copied()
    }
}

/// Scan options. `k_max = None` means [`default_k_max`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRange {
    pub theta: f64,
    pub k_min: usize,
    pub k_max: Option<usize>,
}

impl Default for ScanRange {
    fn default() -> Self {
        Self {
            theta: DEFAULT_THETA,
            k_min: DEFAULT_K_MIN,
            k_max: None,
        }
    }
}

impl ScanRange {
    pub fn with_theta(theta: f64) -> Self {
        Self {
            theta,
            ..Self::default()
        }
    }

    pub fn select(&self, sample: &LossSample, method: TailMethod) -> Result<ThresholdSelection> {
        let k_max = self.k_max.unwrap_or_else(|| default_k_max(sample.len()));
        reiss_thomas_select(sample, method, self.theta, self.k_min, k_max)
    }
}

/// Estimator path `γ̂(1), ..., γ̂(k_max)`.
pub fn estimator_path(sample: &LossSample, method: TailMethod, k_max: usize) -> Result<Vec<f64>> {
    (1..=k_max)
        .into_par_iter()
        .map(|k| method.estimate(sample, k).map(|e| e.gamma_hat))
        .collect()
}

fn median_of_sorted(sorted: &[f64]) -> f64 {
    let m = sorted.len();
    if m % 2 == 1 {
        sorted[m / 2]
    } else {
        (sorted[m / 2 - 1] + sorted[m / 2]) / 2.0
    }
}

pub fn reiss_thomas_select(
    sample: &LossSample,
    method: TailMethod,
    theta: f64,
    k_min: usize,
    k_max: usize,
) -> Result<ThresholdSelection> {
    let n = sample.len();
    if !(2 <= k_min && k_min <= k_max && k_max < n && (0.0..1.0).contains(&theta)) {
        return Err(Error::RangeInvalid {
            k_min,
            k_max,
            theta,
            n,
        });
    }

    let path = estimator_path(sample, method, k_max)?;
    let weights: Vec<f64> = (1..=k_max).map(|i| (i as f64).powf(theta)).collect();

    // running medians of the path prefixes, by sorted insertion
    let mut sorted = Vec::with_capacity(k_max);
    let mut medians = Vec::with_capacity(k_max - k_min + 1);
    for (k, &g) in (1..=k_max).zip(&path) {
        let pos = sorted.partition_point(|&x: &f64| x < g);
        sorted.insert(pos, g);
        if k >= k_min {
            medians.push(median_of_sorted(&sorted));
        }
    }

    let criterion_values: Vec<f64> = (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            let m = medians[k - k_min];
            let total: f64 = path[..k]
                .iter()
                .zip(&weights[..k])
                .map(|(g, w)| w * (g - m).abs())
                .sum();
            total / k as f64
        })
        .collect();

    let mut best = 0;
    for (i, &c) in criterion_values.iter().enumerate() {
        if c < criterion_values[best] {
            best = i;
        }
    }

    Ok(ThresholdSelection {
        k_star: k_min + best,
        theta,
        method,
        k_min,
        k_max,
        criterion_values,
    })
}
