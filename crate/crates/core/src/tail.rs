//! Tail-index estimators and Weissman high-quantile extrapolation.
//!
//! Both estimators read the top `k + 1` order statistics of a [`LossSample`]:
//! the `k` upper extremes `X_{n-k+1:n}, ..., X_{n:n}` and the threshold
//! `X_{n-k:n}`. Ties among those values are fine; a zero threshold is not.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::LossSample;

/// Tail-index estimator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMethod {
    /// Mean of the top log-spacings.
    Hill,
    /// Harmonic-mean (score moment) estimator.
    THill,
}

impl TailMethod {
    pub fn estimate(self, sample: &LossSample, k: usize) -> Result<TailIndexEstimate> {
        match self {
            TailMethod::Hill => hill_estimator(sample, k),
            TailMethod::THill => t_hill_estimator(sample, k),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TailMethod::Hill => "hill",
            TailMethod::THill => "t_hill",
        }
    }
}

impl std::fmt::Display for TailMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailIndexEstimate {
    pub gamma_hat: f64,
    pub k: usize,
    pub method: TailMethod,
}

fn positive_threshold(sample: &LossSample, k: usize) -> Result<f64> {
    sample.check_k(k)?;
    let threshold = sample.threshold(k);
    if threshold > 0.0 {
        Ok(threshold)
    } else {
        Err(Error::NonPositiveTailValue {
            k,
            value: threshold,
        })
    }
}

/// Hill estimator: average of `log X_{n-i+1:n} - log X_{n-k:n}` over `i = 1..=k`.
pub fn hill_estimator(sample: &LossSample, k: usize) -> Result<TailIndexEstimate> {
    let log_threshold = positive_threshold(sample, k)?.ln();
    let total: f64 = (1..=k).map(|i| sample.upper(i).ln() - log_threshold).sum();
    Ok(TailIndexEstimate {
        gamma_hat: total / k as f64,
        k,
        method: TailMethod::Hill,
    })
}

/// Mean of the ratios `X_{n-k:n} / X_{n-j+1:n}`, `j = 1..=k`. Lies in `(0, 1]`.
pub fn harmonic_ratio_mean(sample: &LossSample, k: usize) -> Result<f64> {
    let threshold = positive_threshold(sample, k)?;
    let total: f64 = (1..=k).map(|j| threshold / sample.upper(j)).sum();
    Ok(total / k as f64)
}

/// t-Hill estimator: `1 / S_k - 1` with `S_k` from [`harmonic_ratio_mean`].
///
/// Each ratio is bounded by one, so a single huge observation can move the
/// estimate by at most one ratio term. The Hill estimator has no such bound.
pub fn t_hill_estimator(sample: &LossSample, k: usize) -> Result<TailIndexEstimate> {
    let s_k = harmonic_ratio_mean(sample, k)?;
    Ok(TailIndexEstimate {
        gamma_hat: 1.0 / s_k - 1.0,
        k,
        method: TailMethod::THill,
    })
}

/// Weissman extrapolation of the quantile `F^{-1}(1 - s)` for `0 < s <= k/n`:
/// `(k/n)^γ X_{n-k:n} s^{-γ}`.
///
/// Any finite `gamma_hat` is accepted; premium routines enforce their own
/// finiteness conditions.
pub fn weissman_quantile(sample: &LossSample, k: usize, gamma_hat: f64, s: f64) -> Result<f64> {
    sample.check_k(k)?;
    let upper = k as f64 / sample.len() as f64;
    if !(s > 0.0 && s <= upper) {
        return Err(Error::SOutOfRange { s, upper });
    }
    Ok(sample.threshold(k) * (upper / s).powf(gamma_hat))
}

/// Limiting variance of `sqrt(k) (γ̂ - γ)` for the t-Hill estimator:
/// `γ² (1 + γ)² / (1 + 2γ)`.
pub fn t_hill_asymptotic_variance(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::NonPositiveGamma(gamma));
    }
    Ok(gamma * gamma * (1.0 + gamma).powi(2) / (1.0 + 2.0 * gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::sort_sample;

    fn geometric() -> LossSample {
        sort_sample(&[1.0, 2.0, 4.0, 8.0, 16.0]).unwrap()
    }

    fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn hill_hand_value() {
        // (ln 16 + ln 8)/2 - ln 4 = (4 + 3)/2 ln2 - 2 ln2 = 1.5 ln 2
        let est = hill_estimator(&geometric(), 2).unwrap();
        assert!(rel_eq(est.gamma_hat, 1.5 * 2f64.ln(), 1e-14));
        assert!((est.gamma_hat - 1.03972).abs() < 1e-5);
        assert_eq!(est.method, TailMethod::Hill);
        assert_eq!(est.k, 2);
    }

    #[test]
    fn constant_sample_gives_zero() {
        let s = sort_sample(&[3.7; 4]).unwrap();
        for k in 1..4 {
            assert_eq!(hill_estimator(&s, k).unwrap().gamma_hat, 0.0);
            assert_eq!(harmonic_ratio_mean(&s, k).unwrap(), 1.0);
            assert_eq!(t_hill_estimator(&s, k).unwrap().gamma_hat, 0.0);
        }
    }

    #[test]
    fn scale_invariance_on_geometric() {
        let scaled = geometric().scaled(7.0).unwrap();
        let a = hill_estimator(&geometric(), 2).unwrap().gamma_hat;
        let b = hill_estimator(&scaled, 2).unwrap().gamma_hat;
        assert!(rel_eq(a, b, 1e-12));
        let a = t_hill_estimator(&geometric(), 2).unwrap().gamma_hat;
        let b = t_hill_estimator(&scaled, 2).unwrap().gamma_hat;
        assert!(rel_eq(a, b, 1e-12));
    }

    #[test]
    fn t_hill_hand_value() {
        // S = (4/16 + 4/8)/2 = 0.375
        assert_eq!(harmonic_ratio_mean(&geometric(), 2).unwrap(), 0.375);
        let est = t_hill_estimator(&geometric(), 2).unwrap();
        assert!(rel_eq(est.gamma_hat, 5.0 / 3.0, 1e-14));
    }

    #[test]
    fn t_hill_bounded_when_maximum_explodes() {
        for m in [1e6, 1e12] {
            let s = sort_sample(&[1.0, 2.0, 4.0, 8.0, m]).unwrap();
            let t = t_hill_estimator(&s, 2).unwrap().gamma_hat;
            assert!(t < 3.0 && t > 2.99, "t-Hill {t} at M = {m}");
            let h = hill_estimator(&s, 2).unwrap().gamma_hat;
            // (ln M + ln 8)/2 - ln 4
            assert!(rel_eq(h, (m.ln() + 8f64.ln()) / 2.0 - 4f64.ln(), 1e-12));
        }
    }

    #[test]
    fn estimator_errors() {
        let s = geometric();
        assert!(matches!(
            hill_estimator(&s, 0),
            Err(Error::KOutOfRange { .. })
        ));
        assert!(matches!(
            t_hill_estimator(&s, 5),
            Err(Error::KOutOfRange { .. })
        ));
        let z = sort_sample(&[0.0, 0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            hill_estimator(&z, 2),
            Err(Error::NonPositiveTailValue { .. })
        ));
        assert!(matches!(
            t_hill_estimator(&z, 3),
            Err(Error::NonPositiveTailValue { .. })
        ));
        // zeros below the threshold are fine
        assert!(hill_estimator(&z, 1).is_ok());
        assert!(t_hill_estimator(&z, 1).is_ok());
    }

    #[test]
    fn weissman_values() {
        let s = geometric();
        assert_eq!(weissman_quantile(&s, 2, 0.8, 0.4).unwrap(), 4.0);
        assert!(rel_eq(
            weissman_quantile(&s, 2, 1.0, 0.1).unwrap(),
            16.0,
            1e-14
        ));
        assert_eq!(weissman_quantile(&s, 2, 0.0, 0.01).unwrap(), 4.0);
        // gamma >= 1 is accepted by the primitive
        assert!(weissman_quantile(&s, 2, 1.7, 0.05).unwrap() > 4.0);
        assert!(matches!(
            weissman_quantile(&s, 2, 1.0, 0.0),
            Err(Error::SOutOfRange { .. })
        ));
        assert!(matches!(
            weissman_quantile(&s, 2, 1.0, 0.41),
            Err(Error::SOutOfRange { .. })
        ));
    }

    #[test]
    fn asymptotic_variance_values() {
        // 0.36 * 2.56 / 2.2
        let v = t_hill_asymptotic_variance(0.6).unwrap();
        assert!(rel_eq(v, 0.36 * 2.56 / 2.2, 1e-15));
        assert!((v - 0.41891).abs() < 1e-5);
        assert!(rel_eq(
            t_hill_asymptotic_variance(1.0).unwrap(),
            4.0 / 3.0,
            1e-15
        ));
        assert!(t_hill_asymptotic_variance(1e-9).unwrap() < 1e-17);
        assert_eq!(
            t_hill_asymptotic_variance(0.0),
            Err(Error::NonPositiveGamma(0.0))
        );
        assert!(t_hill_asymptotic_variance(-1.0).is_err());
    }
}
