//! Distortion premium estimators.
//!
//! Three estimators of `Π[ψ; F] = ∫ ψ(1 - F(x)) dx` are provided:
//!
//! * the empirical L-statistic `Σ c_{i,n}(ψ) X_{n-i+1:n}`;
//! * the extrapolated estimator, which keeps the L-statistic below the
//!   threshold `X_{n-k:n}` and replaces the top `k/n` of the quantile
//!   function by the Weissman extrapolation with a fitted tail index;
//! * its closed form for the proportional-hazards transform `ψ(t) = t^{1/ρ}`,
//!   with either the t-Hill or the Hill tail index.
//!
//! The extrapolated pieces only exist when `∫_0^{k/n} s^{-γ̂-1} ψ(s) ds`
//! converges, i.e. `γ̂ρ < 1` for the proportional-hazards transform. Outside
//! that region the premium under the fitted tail is infinite and the
//! estimators return an error instead of a number.

use serde::{Deserialize, Serialize};

use crate::distortion::{l_coefficients, Distortion};
use crate::error::{Error, Result};
use crate::normal::standard_normal_quantile;
use crate::quadrature;
use crate::sample::LossSample;
use crate::tail::TailMethod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PremiumEstimator {
    Empirical,
    ThillExtrapolated,
    HillExtrapolated,
    GeneralExtrapolated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PremiumEstimate {
    pub value: f64,
    pub estimator: PremiumEstimator,
    pub distortion: Distortion,
    /// Number of upper order statistics; absent for the empirical estimator.
    pub k: Option<usize>,
    pub gamma_hat: Option<f64>,
    pub tail_method: Option<TailMethod>,
    pub std_error: Option<f64>,
    /// `(lower, upper, alpha)`.
    pub ci: Option<ConfidenceInterval>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub alpha: f64,
}

/// `Σ_{i=1..n} c_{i,n}(ψ) X_{n-i+1:n}`.
pub fn empirical_premium(sample: &LossSample, psi: &Distortion) -> Result<PremiumEstimate> {
    let weights = l_coefficients(psi, sample.len())?;
    let value = weights
        .iter()
        .enumerate()
        .map(|(i, c)| c * sample.upper(i + 1))
        .sum();
    Ok(PremiumEstimate {
        value,
        estimator: PremiumEstimator::Empirical,
        distortion: *psi,
        k: None,
        gamma_hat: None,
        tail_method: None,
        std_error: None,
        ci: None,
    })
}

/// `Σ_{i=k+1..n} c_{i,n}(ψ) X_{n-i+1:n}`, the part of the L-statistic below the threshold.
fn body_sum(sample: &LossSample, k: usize, psi: &Distortion) -> f64 {
    let nf = sample.len() as f64;
    let mut prev = psi.eval_unchecked(k as f64 / nf);
    let mut total = 0.0;
    for i in k + 1..=sample.len() {
        let cur = psi.eval_unchecked(i as f64 / nf);
        total += (cur - prev) * sample.upper(i);
        prev = cur;
    }
    total
}

fn heaviness_check(gamma_hat: f64, rho: f64) -> Result<()> {
    let product = gamma_hat * rho;
    if product >= 1.0 || product.is_nan() {
        return Err(Error::HeavinessConditionViolated {
            gamma_hat,
            rho,
            product,
        });
    }
    Ok(())
}

/// Proportional-hazards premium with the top `k/n` extrapolated:
/// `(k/n)^{1/ρ} X_{n-k:n} / (1 - γ̂ρ) + Σ_{i>k} ((i/n)^{1/ρ} - ((i-1)/n)^{1/ρ}) X_{n-i+1:n}`.
pub fn premium_ph(
    sample: &LossSample,
    k: usize,
    rho: f64,
    method: TailMethod,
) -> Result<PremiumEstimate> {
    let psi = Distortion::proportional_hazards(rho)?;
    let gamma_hat = method.estimate(sample, k)?.gamma_hat;
    heaviness_check(gamma_hat, rho)?;
    let frac = k as f64 / sample.len() as f64;
    let tail = frac.powf(1.0 / rho) * sample.threshold(k) / (1.0 - gamma_hat * rho);
    Ok(PremiumEstimate {
        value: tail + body_sum(sample, k, &psi),
        estimator: match method {
            TailMethod::THill => PremiumEstimator::ThillExtrapolated,
            TailMethod::Hill => PremiumEstimator::HillExtrapolated,
        },
        distortion: psi,
        k: Some(k),
        gamma_hat: Some(gamma_hat),
        tail_method: Some(method),
        std_error: None,
        ci: None,
    })
}

/// Robust estimator: [`premium_ph`] with the t-Hill tail index.
pub fn premium_ph_thill(sample: &LossSample, k: usize, rho: f64) -> Result<PremiumEstimate> {
    premium_ph(sample, k, rho, TailMethod::THill)
}

/// Comparison estimator: [`premium_ph`] with the Hill tail index.
pub fn premium_ph_hill(sample: &LossSample, k: usize, rho: f64) -> Result<PremiumEstimate> {
    premium_ph(sample, k, rho, TailMethod::Hill)
}

/// `γ̂ a^{γ̂} ∫_0^a s^{-γ̂-1} ψ(s) ds`, the extrapolated tail contribution
/// per unit of threshold.
///
/// Writing `ψ(s) = s^β h(s)` with `β` the index of `ψ` at zero, the
/// substitution `u = s^{β-γ̂}` turns the integral into
/// `(β-γ̂)^{-1} ∫_0^{a^{β-γ̂}} h(u^{1/(β-γ̂)}) du`, whose integrand is bounded.
/// For `h ≡ 1` (proportional hazards, identity) this is evaluated exactly.
pub fn extrapolated_tail_factor(psi: &Distortion, gamma_hat: f64, a: f64) -> Result<f64> {
    psi.validate()?;
    if let Some(rho) = psi.rho() {
        heaviness_check(gamma_hat, rho).map_err(|_| Error::DivergentTailIntegral {
            gamma_hat,
            index: 1.0 / rho,
        })?;
        return Ok(a.powf(1.0 / rho) * gamma_hat * rho / (1.0 - gamma_hat * rho));
    }
    let beta = psi.index_at_zero();
    if !(gamma_hat < beta) {
        return Err(Error::DivergentTailIntegral {
            gamma_hat,
            index: beta,
        });
    }
    if gamma_hat == 0.0 {
        return Ok(0.0);
    }
    let e = beta - gamma_hat;
    let reduced_integral = match psi {
        Distortion::Identity | Distortion::ProportionalHazards { .. } => a.powf(e),
        Distortion::DualPower { .. } => {
            let inv_e = 1.0 / e;
            quadrature::integrate(
                |u| psi.reduced(u.powf(inv_e)),
                0.0,
                a.powf(e),
                1e-14,
                1e-13,
                4000,
            )?
        }
    };
    Ok(gamma_hat * a.powf(gamma_hat) * reduced_integral / e)
}

/// Extrapolated premium for an arbitrary distortion:
/// `X_{n-k:n} (ψ(k/n) + γ̂ (k/n)^{γ̂} ∫_0^{k/n} s^{-γ̂-1} ψ(s) ds) + Σ_{i>k} c_{i,n}(ψ) X_{n-i+1:n}`.
pub fn premium_general(
    sample: &LossSample,
    k: usize,
    psi: &Distortion,
    method: TailMethod,
) -> Result<PremiumEstimate> {
    psi.validate()?;
    let gamma_hat = method.estimate(sample, k)?.gamma_hat;
    let a = k as f64 / sample.len() as f64;
    let factor = psi.eval_unchecked(a) + extrapolated_tail_factor(psi, gamma_hat, a)?;
    Ok(PremiumEstimate {
        value: sample.threshold(k) * factor + body_sum(sample, k, psi),
        estimator: PremiumEstimator::GeneralExtrapolated,
        distortion: *psi,
        k: Some(k),
        gamma_hat: Some(gamma_hat),
        tail_method: Some(method),
        std_error: None,
        ci: None,
    })
}

/// Asymptotic variance of the normalized t-Hill premium estimator,
/// defined for `1/2 < γ` and `1 <= ρ < 1/γ`.
pub fn sigma_squared(gamma: f64, rho: f64) -> Result<f64> {
    let g = gamma;
    let r = rho;
    if !(g > 0.5 && r >= 1.0 && g * r < 1.0 && g.is_finite() && r.is_finite()) {
        return Err(Error::ParameterDomainViolated { gamma, rho });
    }
    let gr1 = g * r - 1.0;
    let a = r + g * r - 1.0;
    let b = r + 2.0 * g * r - 2.0;
    Ok(g * g
        + g * g * r * (r - 2.0 * r * g * g + 2.0 * g) / (gr1 * gr1)
        + 2.0 * g * g / (a * b)
        + 2.0 * g / (2.0 * g - 1.0)
        - 2.0 * g * r * (r * g * g - r * g + 1.0) / (gr1 * a))
}

/// Attaches a plug-in normal interval to a t-Hill proportional-hazards estimate.
///
/// `std_error = σ(γ̂, ρ) (k/n)^{1/ρ - 1/2} X_{n-k:n} / √n`, using the threshold
/// in place of the unknown quantile `F^{-1}(1 - k/n)`. `alpha = 1` yields
/// the degenerate interval `(value, value)`.
pub fn confidence_interval(
    estimate: &PremiumEstimate,
    sample: &LossSample,
    alpha: f64,
) -> Result<PremiumEstimate> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let (k, gamma_hat, rho) = match (
        estimate.estimator,
        estimate.k,
        estimate.gamma_hat,
        estimate.distortion.rho(),
    ) {
        (PremiumEstimator::ThillExtrapolated, Some(k), Some(g), Some(rho)) => (k, g, rho),
        _ => return Err(Error::UnsupportedEstimate),
    };
    sample.check_k(k)?;
    let sigma = sigma_squared(gamma_hat, rho)?.sqrt();
    let n = sample.len() as f64;
    let se = sigma * (k as f64 / n).powf(1.0 / rho - 0.5) * sample.threshold(k) / n.sqrt();
    let half = standard_normal_quantile(1.0 - alpha / 2.0) * se;
    let mut out = estimate.clone();
    out.std_error = Some(se);
    out.ci = Some(ConfidenceInterval {
        lower: estimate.value - half,
        upper: estimate.value + half,
        alpha,
    });
    Ok(out)
}
