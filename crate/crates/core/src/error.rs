use thiserror::Error;

/// Errors raised by the estimation, model and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample must contain at least 2 observations, got {0}")]
    EmptyOrTooSmall(usize),
    #[error("observation {index} is negative or not finite: {value}")]
    NegativeOrNonFinite { index: usize, value: f64 },
    #[error("k = {k} outside the admissible range [1, {max}] for n = {n}")]
    KOutOfRange { k: usize, n: usize, max: usize },
    #[error("tail value X[n-{k}:n] = {value} is not strictly positive")]
    NonPositiveTailValue { k: usize, value: f64 },
    #[error("extrapolation level s = {s} outside (0, {upper}]")]
    SOutOfRange { s: f64, upper: f64 },
    #[error("tail index must be positive, got {0}")]
    NonPositiveGamma(f64),
    #[error("invalid scan range k_min = {k_min}, k_max = {k_max}, theta = {theta} for n = {n}")]
    RangeInvalid {
        k_min: usize,
        k_max: usize,
        theta: f64,
        n: usize,
    },
    #[error("distortion argument t = {0} outside [0, 1]")]
    TOutOfRange(f64),
    #[error("invalid distortion parameter: {0}")]
    InvalidDistortion(String),
    #[error(
        "heaviness condition violated: gamma_hat * rho = {gamma_hat} * {rho} = {product} >= 1"
    )]
    HeavinessConditionViolated {
        gamma_hat: f64,
        rho: f64,
        product: f64,
    },
    #[error("tail integral diverges: gamma_hat = {gamma_hat} >= regular-variation index {index} of the distortion at zero")]
    DivergentTailIntegral { gamma_hat: f64, index: f64 },
    #[error("distortion parameter rho must be >= 1, got {0}")]
    RhoInvalid(f64),
    #[error("parameters outside the domain 1/2 < gamma, 1 <= rho < 1/gamma: gamma = {gamma}, rho = {rho}")]
    ParameterDomainViolated { gamma: f64, rho: f64 },
    #[error("confidence level alpha = {0} outside (0, 1]")]
    AlphaOutOfRange(f64),
    #[error("confidence intervals are only defined for the t-Hill extrapolated proportional-hazards premium")]
    UnsupportedEstimate,
    #[error("x = {0} outside the support of the model")]
    OutOfSupport(f64),
    #[error("probability u = {0} outside [0, 1)")]
    UOutOfRange(f64),
    #[error("root not bracketed for u = {0}")]
    RootNotBracketed(f64),
    #[error("invalid model parameters: {0}")]
    InvalidModel(String),
    #[error("premium diverges: heaviest tail index {gamma} times rho {rho} is >= 1")]
    DivergentPremium { gamma: f64, rho: f64 },
    #[error(
        "quadrature did not converge: estimated error {error:e} after {intervals} subintervals"
    )]
    QuadratureFailed { error: f64, intervals: usize },
    #[error("invalid simulation study: {0}")]
    InvalidStudy(String),
    #[error("all replications failed for n = {n}, eps = {eps}, estimator = {estimator}")]
    AllReplicationsFailed {
        n: usize,
        eps: f64,
        estimator: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
