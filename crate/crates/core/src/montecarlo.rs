//! Replication engine for the bias/RMSE studies.
//!
//! Each replication draws one sample, picks `k*` separately for the t-Hill
//! and the Hill path with the Reiss–Thomas scan, and evaluates both tail
//! indices and both proportional-hazards premiums at their own `k*`.
//! Replications run in parallel; results are collected by index and reduced
//! in index order, so reports do not depend on the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{LossModel, SupportVariant};
use crate::premium::premium_ph;
use crate::rng::replication_stream;
use crate::sample::LossSample;
use crate::tail::TailMethod;
use crate::threshold::{ScanRange, DEFAULT_THETA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyEstimator {
    ThillGamma,
    ThillPremium,
    HillGamma,
    HillPremium,
}

impl StudyEstimator {
    pub const ALL: [StudyEstimator; 4] = [
        Self::ThillGamma,
        Self::ThillPremium,
        Self::HillGamma,
        Self::HillPremium,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::ThillGamma => "thill_gamma",
            Self::ThillPremium => "thill_premium",
            Self::HillGamma => "hill_gamma",
            Self::HillPremium => "hill_premium",
        }
    }

    pub fn method(self) -> TailMethod {
        match self {
            Self::ThillGamma | Self::ThillPremium => TailMethod::THill,
            Self::HillGamma | Self::HillPremium => TailMethod::Hill,
        }
    }

    pub fn is_premium(self) -> bool {
        matches!(self, Self::ThillPremium | Self::HillPremium)
    }
}

impl std::str::FromStr for StudyEstimator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| format!("unknown estimator `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationStudy {
    pub model: LossModel,
    pub sizes: Vec<usize>,
    /// Contamination levels swept for mixture models; ignored otherwise.
    /// Empty means "use the model's own ε".
    pub eps_grid: Vec<f64>,
    pub replications: usize,
    pub rho: f64,
    pub theta: f64,
    pub seed: u64,
    pub estimators: Vec<StudyEstimator>,
    /// Keep every per-replication record in the report.
    pub keep_records: bool,
}

impl SimulationStudy {
    /// Uncontaminated Lomax(0.6) claims, `ρ = 1.12`, `n ∈ {100, 200, 500, 1000}`.
    pub fn table1() -> Self {
        Self {
            model: LossModel::Lomax { gamma: 0.6 },
            sizes: vec![100, 200, 500, 1000],
            eps_grid: Vec::new(),
            replications: 1000,
            rho: 1.12,
            theta: DEFAULT_THETA,
            seed: 1,
            estimators: StudyEstimator::ALL.to_vec(),
            keep_records: false,
        }
    }

    /// Lomax(0.6) contaminated by Lomax(2) at ε ∈ {5, 10, 15, 25}%.
    pub fn table2() -> Self {
        Self {
            model: LossModel::Mixture {
                gamma1: 0.6,
                gamma2: 2.0,
                eps: 0.0,
                support: SupportVariant::Lomax,
            },
            sizes: vec![100, 200, 1000],
            eps_grid: vec![0.05, 0.10, 0.15, 0.25],
            estimators: vec![StudyEstimator::ThillPremium, StudyEstimator::HillPremium],
            ..Self::table1()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidStudy(msg));
        self.model.validate()?;
        if self.replications == 0 {
            return fail("replications must be at least 1".into());
        }
        if self.sizes.is_empty() || self.sizes.iter().any(|&n| n < 10) {
            return fail(format!(
                "sample sizes must all be >= 10, got {:?}",
                self.sizes
            ));
        }
        if !(self.rho >= 1.0 && self.rho.is_finite()) {
            return Err(Error::RhoInvalid(self.rho));
        }
        if !(0.0..1.0).contains(&self.theta) {
            return fail(format!("theta must lie in [0, 1), got {}", self.theta));
        }
        if self.estimators.is_empty() {
            return fail("no estimators selected".into());
        }
        for &eps in &self.eps_grid {
            self.model.with_eps(eps).validate()?;
        }
        Ok(())
    }

    /// Models actually simulated, one per contamination level.
    pub fn scenarios(&self) -> Vec<(f64, LossModel)> {
        match self.model {
            LossModel::Mixture { eps, .. } if self.eps_grid.is_empty() => vec![(eps, self.model)],
            LossModel::Mixture { .. } => self
                .eps_grid
                .iter()
                .map(|&e| (e, self.model.with_eps(e)))
                .collect(),
            _ => vec![(0.0, self.model)],
        }
    }
}

/// Outcome of one estimator path (t-Hill or Hill) within a replication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathOutcome {
    pub k_star: Option<usize>,
    pub gamma_hat: Option<f64>,
    pub premium: Option<f64>,
    pub error: Option<String>,
}

impl PathOutcome {
    fn evaluate(sample: &LossSample, method: TailMethod, rho: f64, theta: f64) -> Self {
        let selection = match ScanRange::with_theta(theta).select(sample, method) {
            Ok(s) => s,
            Err(e) => {
                return Self {
                    k_star: None,
                    gamma_hat: None,
                    premium: None,
                    error: Some(e.to_string()),
                }
            }
        };
        let k = selection.k_star;
        let gamma_hat = method.estimate(sample, k).ok().map(|e| e.gamma_hat);
        let (premium, error) = match premium_ph(sample, k, rho, method) {
            Ok(p) => (Some(p.value), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Self {
            k_star: Some(k),
            gamma_hat,
            premium,
            error,
        }
    }

    fn value(&self, estimator: StudyEstimator) -> Option<f64> {
        if estimator.is_premium() {
            self.premium
        } else {
            self.gamma_hat
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub n: usize,
    pub eps: f64,
    pub rep: usize,
    pub thill: PathOutcome,
    pub hill: PathOutcome,
}

impl ReplicationRecord {
    pub fn path(&self, method: TailMethod) -> &PathOutcome {
        match method {
            TailMethod::THill => &self.thill,
            TailMethod::Hill => &self.hill,
        }
    }
}

/// Both estimator paths on a given sample. Errors are recorded, not raised.
pub fn evaluate_sample(sample: &LossSample, rho: f64, theta: f64) -> (PathOutcome, PathOutcome) {
    (
        PathOutcome::evaluate(sample, TailMethod::THill, rho, theta),
        PathOutcome::evaluate(sample, TailMethod::Hill, rho, theta),
    )
}

/// Replication `rep` at size `n` for one scenario model.
pub fn run_replication(
    study: &SimulationStudy,
    model: &LossModel,
    eps: f64,
    n: usize,
    rep: usize,
) -> Result<ReplicationRecord> {
    let mut rng = replication_stream(study.seed, n, rep);
    let sample = model.sample(n, &mut rng)?;
    let (thill, hill) = evaluate_sample(&sample, study.rho, study.theta);
    Ok(ReplicationRecord {
        n,
        eps,
        rep,
        thill,
        hill,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasRmse {
    pub bias: f64,
    pub rmse: f64,
    pub successes: usize,
    pub failures: usize,
}

/// Bias and RMSE over the successful values; `None` entries count as failures.
pub fn bias_rmse(values: &[Option<f64>], truth: f64) -> Result<BiasRmse> {
    let ok: Vec<f64> = values.iter().flatten().map(|v| v - truth).collect();
    let failures = values.len() - ok.len();
    if ok.is_empty() {
        return Err(Error::AllReplicationsFailed {
            n: 0,
            eps: f64::NAN,
            estimator: String::new(),
        });
    }
    let m = ok.len() as f64;
    let bias = ok.iter().sum::<f64>() / m;
    let mse = ok.iter().map(|d| d * d).sum::<f64>() / m;
    Ok(BiasRmse {
        bias,
        rmse: mse.sqrt(),
        successes: ok.len(),
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportCell {
    pub n: usize,
    pub eps: f64,
    pub estimator: StudyEstimator,
    pub k_star_mean: f64,
    pub bias: f64,
    pub rmse: f64,
    pub failures: usize,
    pub successes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub study: SimulationStudy,
    pub truth_gamma: f64,
    pub truth_premium: f64,
    pub cells: Vec<ReportCell>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub records: Option<Vec<ReplicationRecord>>,
}

impl SimulationReport {
    pub fn cell(&self, n: usize, eps: f64, estimator: StudyEstimator) -> Option<&ReportCell> {
        self.cells
            .iter()
            .find(|c| c.n == n && c.eps == eps && c.estimator == estimator)
    }
}

fn aggregate(
    records: &[ReplicationRecord],
    n: usize,
    eps: f64,
    estimator: StudyEstimator,
    truth: f64,
) -> Result<ReportCell> {
    let paths: Vec<&PathOutcome> = records.iter().map(|r| r.path(estimator.method())).collect();
    let values: Vec<Option<f64>> = paths.iter().map(|p| p.value(estimator)).collect();
    let summary = bias_rmse(&values, truth).map_err(|_| Error::AllReplicationsFailed {
        n,
        eps,
        estimator: estimator.as_str().to_string(),
    })?;
    let ks: Vec<f64> = paths
        .iter()
        .filter_map(|p| p.k_star)
        .map(|k| k as f64)
        .collect();
    let k_star_mean = if ks.is_empty() {
        f64::NAN
    } else {
        ks.iter().sum::<f64>() / ks.len() as f64
    };
    Ok(ReportCell {
        n,
        eps,
        estimator,
        k_star_mean,
        bias: summary.bias,
        rmse: summary.rmse,
        failures: summary.failures,
        successes: summary.successes,
    })
}

/// Runs the full design: sizes × contamination levels × replications.
///
/// Index estimators are scored against the core tail index, premium
/// estimators against the premium of the uncontaminated core model.
pub fn run_study(study: &SimulationStudy) -> Result<SimulationReport> {
    study.validate()?;
    let truth_gamma = study.model.core_gamma();
    let truth_premium = study.model.core().true_premium(study.rho)?;
    let mut cells = Vec::new();
    let mut kept = study.keep_records.then(Vec::new);
    for &n in &study.sizes {
        for (eps, model) in study.scenarios() {
            let records = (0..study.replications)
                .into_par_iter()
                .map(|rep| run_replication(study, &model, eps, n, rep))
                .collect::<Result<Vec<_>>>()?;
            for &estimator in &study.estimators {
                let truth = if estimator.is_premium() {
                    truth_premium
                } else {
                    truth_gamma
                };
                cells.push(aggregate(&records, n, eps, estimator, truth)?);
            }
            if let Some(all) = kept.as_mut() {
                all.extend(records);
            }
        }
    }
    Ok(SimulationReport {
        study: study.clone(),
        truth_gamma,
        truth_premium,
        cells,
        records: kept,
    })
}
