//! Report serializers. CSV floats carry 17 significant digits in
//! scientific notation so they parse back to the same `f64`.

use std::io::Write;

use robprem_core::SimulationReport;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const REPORT_COLUMNS: [&str; 7] = [
    "n",
    "eps",
    "estimator",
    "k_star_mean",
    "bias",
    "rmse",
    "failures",
];

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Output(e.to_string())
}

pub fn write_report_csv<W: Write>(report: &SimulationReport, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_COLUMNS).map_err(csv_err)?;
    for c in &report.cells {
        w.write_record([
            c.n.to_string(),
            fmt_f64(c.eps),
            c.estimator.as_str().to_string(),
            fmt_f64(c.k_star_mean),
            fmt_f64(c.bias),
            fmt_f64(c.rmse),
            c.failures.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))
}

pub fn report_to_json(report: &SimulationReport) -> Result<String, CliError> {
    serde_json::to_string_pretty(report).map_err(|e| CliError::Output(e.to_string()))
}

/// Inverse of [`report_to_json`].
pub fn report_from_json(text: &str) -> Result<SimulationReport, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid report JSON: {e}")))
}

/// Output of `robprem estimate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub method: robprem_core::TailMethod,
    pub n: usize,
    pub k: usize,
    /// `"reiss_thomas"` or `"fixed"`.
    pub k_source: String,
    pub theta: Option<f64>,
    pub rho: f64,
    pub gamma_hat: f64,
    pub premium: f64,
    pub std_error: Option<f64>,
    pub ci_lower: Option<f64>,
    pub ci_upper: Option<f64>,
    pub alpha: Option<f64>,
}

impl EstimateReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "method",
            "n",
            "k",
            "k_source",
            "theta",
            "rho",
            "gamma_hat",
            "premium",
            "std_error",
            "ci_lower",
            "ci_upper",
            "alpha",
        ])
        .map_err(csv_err)?;
        w.write_record([
            self.method.as_str().to_string(),
            self.n.to_string(),
            self.k.to_string(),
            self.k_source.clone(),
            fmt_opt(self.theta),
            fmt_f64(self.rho),
            fmt_f64(self.gamma_hat),
            fmt_f64(self.premium),
            fmt_opt(self.std_error),
            fmt_opt(self.ci_lower),
            fmt_opt(self.ci_upper),
            fmt_opt(self.alpha),
        ])
        .map_err(csv_err)?;
        w.flush().map_err(|e| CliError::Output(e.to_string()))
    }
}

/// Output of `robprem variance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub gamma: f64,
    pub rho: f64,
    pub sigma_squared: f64,
    pub t_hill_variance: f64,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub alpha: f64,
    /// `z_{1-α/2} σ (k/n)^{1/ρ-1/2} / √n`; multiply by `X_{n-k:n}` for the
    /// interval half-width.
    pub half_width_factor: Option<f64>,
}

impl VarianceReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "gamma",
            "rho",
            "sigma_squared",
            "t_hill_variance",
            "n",
            "k",
            "alpha",
            "half_width_factor",
        ])
        .map_err(csv_err)?;
        w.write_record([
            fmt_f64(self.gamma),
            fmt_f64(self.rho),
            fmt_f64(self.sigma_squared),
            fmt_f64(self.t_hill_variance),
            self.n.map(|v| v.to_string()).unwrap_or_default(),
            self.k.map(|v| v.to_string()).unwrap_or_default(),
            fmt_f64(self.alpha),
            fmt_opt(self.half_width_factor),
        ])
        .map_err(csv_err)?;
        w.flush().map_err(|e| CliError::Output(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 2.048780487804878, 1e-300, -7.25e12, f64::MIN_POSITIVE] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17);
        }
    }
}
