//! Robust distortion risk premiums for heavy-tailed losses.
//!
//! The crate estimates `Π[ψ; F] = ∫_0^∞ ψ(1 - F(x)) dx` from a loss sample
//! by keeping the empirical L-statistic for the body of the distribution and
//! extrapolating the top `k/n` fraction with a Weissman-type quantile. The
//! tail index behind the extrapolation comes either from the Hill estimator
//! or from the outlier-resistant t-Hill (harmonic mean) estimator.
//!
//! Modules:
//! - [`sample`], [`tail`]: order statistics, tail-index estimators, Weissman quantiles
//! - [`threshold`]: Reiss–Thomas choice of `k`
//! - [`distortion`], [`premium`]: distortion functions and premium estimators
//! - [`models`], [`rng`]: Pareto-type loss models and reproducible streams
//! - [`montecarlo`]: bias/RMSE simulation studies
//!
//! Asymptotic results assume a second-order regularly varying tail and a
//! distortion whose reciprocal-argument form is regularly varying; neither is
//! checked at runtime.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distortion;
pub mod error;
pub mod models;
pub mod montecarlo;
pub mod normal;
pub mod premium;
pub mod quadrature;
pub mod rng;
pub mod sample;
pub mod tail;
pub mod threshold;

pub use distortion::{l_coefficients, Distortion};
pub use error::{Error, Result};
pub use models::{LossModel, SupportVariant};
pub use montecarlo::{
    bias_rmse, run_replication, run_study, ReportCell, SimulationReport, SimulationStudy,
    StudyEstimator,
};
pub use premium::{
    confidence_interval, empirical_premium, premium_general, premium_ph_hill, premium_ph_thill,
    sigma_squared, PremiumEstimate, PremiumEstimator,
};
pub use sample::{sort_sample, LossSample};
pub use tail::{
    hill_estimator, t_hill_asymptotic_variance, t_hill_estimator, weissman_quantile,
    TailIndexEstimate, TailMethod,
};
pub use threshold::{reiss_thomas_select, ScanRange, ThresholdSelection};
