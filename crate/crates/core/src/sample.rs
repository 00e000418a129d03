//! Validated loss samples stored as ascending order statistics.

use std::ops::Index;

use crate::error::{Error, Result};

/// An immutable, ascending-sorted sample of nonnegative losses.
///
/// Index `i` (0-based) holds the order statistic `X_{i+1:n}`. The helpers
/// [`LossSample::upper`] and [`LossSample::threshold`] address the sample
/// from the top, which is how every tail estimator reads it.
#[derive(Debug, Clone, PartialEq)]
pub struct LossSample {
    values: Vec<f64>,
}

impl LossSample {
    /// Validates and sorts raw observations.
    pub fn new(mut raw: Vec<f64>) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::EmptyOrTooSmall(raw.len()));
        }
        if let Some((index, &value)) = raw
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::NegativeOrNonFinite { index, value });
        }
        // stable sort; total_cmp is safe because NaN was rejected above
        raw.sort_by(f64::total_cmp);
        Ok(Self { values: raw })
    }

    /// Wraps values the caller guarantees are finite, nonnegative and sorted.
    pub(crate) fn from_sorted_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values.len() >= 2);
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: a valid sample holds at least two observations.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `X_{n-j+1:n}`, the j-th largest observation (`j = 1` is the maximum).
    #[inline]
    pub fn upper(&self, j: usize) -> f64 {
        self.values[self.values.len() - j]
    }

    /// `X_{n-k:n}`, the threshold below the top `k` observations.
    #[inline]
    pub fn threshold(&self, k: usize) -> f64 {
        self.values[self.values.len() - k - 1]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Returns the sample multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| v * c).collect())
    }

    /// Checks `1 <= k < n`.
    pub fn check_k(&self, k: usize) -> Result<()> {
        let n = self.len();
        if k == 0 || k >= n {
            return Err(Error::KOutOfRange { k, n, max: n - 1 });
        }
        Ok(())
    }
}

impl Index<usize> for LossSample {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Convenience wrapper around [`LossSample::new`].
pub fn sort_sample(raw: &[f64]) -> Result<LossSample> {
    LossSample::new(raw.to_vec())
}
