//! Command-line front end for `robprem-core`.
//!
//! Exit codes: 0 success, 2 input error, 3 parameter-domain error,
//! 4 simulation failure.

pub mod input;
pub mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use robprem_core::premium::premium_ph;
use robprem_core::threshold::{ScanRange, DEFAULT_THETA};
use robprem_core::{
    confidence_interval, run_study, sigma_squared, t_hill_asymptotic_variance, Error, LossModel,
    LossSample, SimulationReport, SimulationStudy, SupportVariant, TailMethod,
};
use thiserror::Error;

use crate::output::{EstimateReport, VarianceReport};

pub const DEFAULT_RHO: f64 = 1.12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}: line {line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write output: {0}")]
    Output(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Parse { .. } | Self::Input(_) | Self::Io { .. } | Self::Output(_) => 2,
            Self::Core(Error::AllReplicationsFailed { .. }) => 4,
            Self::Core(Error::EmptyOrTooSmall(_) | Error::NegativeOrNonFinite { .. }) => 2,
            Self::Core(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "robprem",
    version,
    about = "Distortion risk premiums for heavy-tailed losses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the proportional-hazards premium of a loss file.
    Estimate(EstimateArgs),
    /// Run a bias/RMSE simulation study.
    Simulate(SimulateArgs),
    /// Print asymptotic variances for given (gamma, rho).
    Variance(VarianceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Hill,
    #[value(alias = "t_hill", alias = "t-hill")]
    Thill,
}

impl From<MethodArg> for TailMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Hill => TailMethod::Hill,
            MethodArg::Thill => TailMethod::THill,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KChoice {
    Auto,
    Fixed(usize),
}

impl FromStr for KChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Self::Auto);
        }
        s.parse()
            .map(Self::Fixed)
            .map_err(|_| format!("expected `auto` or a positive integer, got `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Table1,
    Table2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Lomax,
    Pareto,
    Mixture,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    /// Loss file, one value per line (`-` for standard input).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Thill)]
    pub method: MethodArg,
    /// Number of upper order statistics, or `auto` for the Reiss–Thomas choice.
    #[arg(long, default_value = "auto")]
    pub k: KChoice,
    #[arg(long, default_value_t = DEFAULT_THETA)]
    pub theta: f64,
    #[arg(long, default_value_t = DEFAULT_RHO)]
    pub rho: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub gamma1: Option<f64>,
    #[arg(long)]
    pub gamma2: Option<f64>,
    /// Contamination levels, comma separated (mixture only).
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    /// Sample sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VarianceArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, default_value_t = DEFAULT_RHO)]
    pub rho: f64,
    /// Sample size for the half-width factor (needs --k).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Runs one command, writing to `--out` if given and to `stdout` otherwise.
pub fn run<W: Write>(cli: &Cli, stdout: W) -> Result<(), CliError> {
    match &cli.command {
        Command::Estimate(a) => {
            let report = cmd_estimate(a)?;
            emit(&a.output, stdout, |w, f| match f {
                Format::Csv => report.write_csv(w),
                Format::Json => write_json(w, &report),
            })
        }
        Command::Simulate(a) => {
            let report = cmd_simulate(a)?;
            emit(&a.output, stdout, |w, f| match f {
                Format::Csv => output::write_report_csv(&report, w),
                Format::Json => {
                    let text = output::report_to_json(&report)?;
                    writeln!(w, "{text}").map_err(|e| CliError::Output(e.to_string()))
                }
            })
        }
        Command::Variance(a) => {
            let report = cmd_variance(a)?;
            emit(&a.output, stdout, |w, f| match f {
                Format::Csv => report.write_csv(w),
                Format::Json => write_json(w, &report),
            })
        }
    }
}

fn write_json<W: Write, T: serde::Serialize>(mut w: W, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    writeln!(w, "{text}").map_err(|e| CliError::Output(e.to_string()))
}

fn emit<W: Write>(
    opts: &OutputArgs,
    stdout: W,
    write: impl FnOnce(&mut dyn Write, Format) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match &opts.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Output(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w, opts.format)?;
            w.flush().map_err(|e| CliError::Output(e.to_string()))
        }
        None => {
            let mut w = stdout;
            write(&mut w, opts.format)?;
            w.flush().map_err(|e| CliError::Output(e.to_string()))
        }
    }
}

pub fn cmd_estimate(args: &EstimateArgs) -> Result<EstimateReport, CliError> {
    let values = input::read_losses(&args.input)?;
    estimate_values(values, args)
}

/// `estimate` on already-parsed losses.
pub fn estimate_values(values: Vec<f64>, args: &EstimateArgs) -> Result<EstimateReport, CliError> {
    let sample = LossSample::new(values)?;
    let method = TailMethod::from(args.method);
    let (k, k_source, theta) = match args.k {
        KChoice::Fixed(k) => (k, "fixed", None),
        KChoice::Auto => {
            let sel = ScanRange::with_theta(args.theta).select(&sample, method)?;
            (sel.k_star, "reiss_thomas", Some(args.theta))
        }
    };
    let mut est = premium_ph(&sample, k, args.rho, method)?;
    if method == TailMethod::THill {
        match confidence_interval(&est, &sample, args.alpha) {
            Ok(with_ci) => est = with_ci,
            // outside the domain of the asymptotic variance: point estimate only
            Err(Error::ParameterDomainViolated { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let ci = est.ci;
    Ok(EstimateReport {
        method,
        n: sample.len(),
        k,
        k_source: k_source.to_string(),
        theta,
        rho: args.rho,
        gamma_hat: est.gamma_hat.unwrap_or(f64::NAN),
        premium: est.value,
        std_error: est.std_error,
        ci_lower: ci.map(|c| c.lower),
        ci_upper: ci.map(|c| c.upper),
        alpha: ci.map(|c| c.alpha),
    })
}

/// Resolves preset and override flags into a study.
pub fn build_study(args: &SimulateArgs) -> Result<SimulationStudy, CliError> {
    let mut study = match args.preset {
        Some(Preset::Table2) => SimulationStudy::table2(),
        Some(Preset::Table1) | None => SimulationStudy::table1(),
    };
    let (kind, g1, g2) = match study.model {
        LossModel::Lomax { gamma } => (ModelArg::Lomax, gamma, 2.0),
        LossModel::StrictPareto { gamma } => (ModelArg::Pareto, gamma, 2.0),
        LossModel::Mixture { gamma1, gamma2, .. } => (ModelArg::Mixture, gamma1, gamma2),
    };
    let kind = args.model.unwrap_or(kind);
    study.model = match kind {
        ModelArg::Lomax => LossModel::Lomax {
            gamma: args.gamma.unwrap_or(g1),
        },
        ModelArg::Pareto => LossModel::StrictPareto {
            gamma: args.gamma.unwrap_or(g1),
        },
        ModelArg::Mixture => LossModel::Mixture {
            gamma1: args.gamma1.or(args.gamma).unwrap_or(g1),
            gamma2: args.gamma2.unwrap_or(g2),
            eps: 0.0,
            support: SupportVariant::Lomax,
        },
    };
    if kind == ModelArg::Mixture {
        if let Some(eps) = &args.eps {
            study.eps_grid = eps.clone();
        } else if study.eps_grid.is_empty() {
            study.eps_grid = SimulationStudy::table2().eps_grid;
        }
    } else {
        if args.eps.is_some() || args.gamma1.is_some() || args.gamma2.is_some() {
            return Err(CliError::Input(
                "--eps, --gamma1 and --gamma2 require --model mixture".into(),
            ));
        }
        study.eps_grid.clear();
    }
    if let Some(sizes) = &args.sizes {
        study.sizes = sizes.clone();
    }
    if let Some(reps) = args.reps {
        study.replications = reps;
    }
    if let Some(seed) = args.seed {
        study.seed = seed;
    }
    if let Some(rho) = args.rho {
        study.rho = rho;
    }
    if let Some(theta) = args.theta {
        study.theta = theta;
    }
    study.validate()?;
    Ok(study)
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<SimulationReport, CliError> {
    let study = build_study(args)?;
    match args.threads {
        Some(t) => {
            if t == 0 {
                return Err(CliError::Input("--threads must be at least 1".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Input(format!("cannot start thread pool: {e}")))?;
            Ok(pool.install(|| run_study(&study))?)
        }
        None => Ok(run_study(&study)?),
    }
}

pub fn cmd_variance(args: &VarianceArgs) -> Result<VarianceReport, CliError> {
    let s2 = sigma_squared(args.gamma, args.rho)?;
    let v = t_hill_asymptotic_variance(args.gamma)?;
    let half_width_factor = match (args.n, args.k) {
        (Some(n), Some(k)) => {
            if !(1 <= k && k < n) {
                return Err(Error::KOutOfRange {
                    k,
                    n,
                    max: n.saturating_sub(1),
                }
                .into());
            }
            if !(args.alpha > 0.0 && args.alpha <= 1.0) {
                return Err(Error::AlphaOutOfRange(args.alpha).into());
            }
            let z = robprem_core::normal::standard_normal_quantile(1.0 - args.alpha / 2.0);
            let nf = n as f64;
            Some(z * s2.sqrt() * (k as f64 / nf).powf(1.0 / args.rho - 0.5) / nf.sqrt())
        }
        (None, None) => None,
        _ => return Err(CliError::Input("--n and --k must be given together".into())),
    };
    Ok(VarianceReport {
        gamma: args.gamma,
        rho: args.rho,
        sigma_squared: s2,
        t_hill_variance: v,
        n: args.n,
        k: args.k,
        alpha: args.alpha,
        half_width_factor,
    })
}
