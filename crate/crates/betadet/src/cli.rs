//! Command-line arguments.

use crate::io::Format;
use betadet_core::{EnsembleKind, EnsembleParams};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "betadet", version, about = "Log-determinant processes of beta ensembles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample log-determinant paths.
    Sample(SampleArgs),
    /// Exact and asymptotic moments over a grid of indices.
    Moments(MomentsArgs),
    /// Marginal rate function over a grid of ξ.
    Rate(RateArgs),
    /// Density/CDF table and log-moment of a limiting spectral law.
    Spectral(SpectralArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct EnsembleArgs {
    /// laguerre, gram, jacobi or aux.
    #[arg(long, default_value = "gram")]
    pub ensemble: String,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub tau1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau2: f64,
}

impl EnsembleArgs {
    pub fn kind(&self) -> Result<EnsembleKind, crate::error::CliError> {
        self.ensemble.parse().map_err(|e: betadet_core::Error| crate::error::CliError::Usage(e.to_string()))
    }

    pub fn params(&self) -> crate::error::CliResult<EnsembleParams> {
        let p = EnsembleParams { kind: self.kind()?, beta: self.beta, n: self.n, tau1: self.tau1, tau2: self.tau2 };
        Ok(p.validated()?)
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct OutputArgs {
    /// Output file; stdout when absent. Not recorded in headers.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct SampleArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 10)]
    pub paths: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Single time t; otherwise an evenly spaced grid of indices.
    #[arg(long)]
    pub t: Option<f64>,
    /// Number of grid indices when --t is absent.
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct RateArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long = "T", default_value_t = 0.5)]
    pub big_t: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub xi_min: f64,
    #[arg(long, default_value_t = -0.01, allow_negative_numbers = true)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 50)]
    pub xi_steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawArg {
    Mp,
    Mckay,
    Cc,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct SpectralArgs {
    #[arg(long, value_enum, default_value_t = LawArg::Mp)]
    pub law: LawArg,
    /// MP ratio c.
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    /// MP scale σ².
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    #[arg(long, default_value_t = 0.2)]
    pub a_minus: f64,
    #[arg(long, default_value_t = 0.7)]
    pub a_plus: f64,
    /// CC parameter u'.
    #[arg(long, default_value_t = 2.0)]
    pub u: f64,
    /// CC parameter v'.
    #[arg(long, default_value_t = 3.0)]
    pub v: f64,
    /// Number of grid points across the support.
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct VerifyArgs {
    /// Comma-separated suites: specfun, lln, endpoint, clt, ldp, cgf,
    /// decomposition, spectral, coupling, esd.
    #[arg(long)]
    pub only: Option<String>,
    /// Base seed for the Monte Carlo criteria.
    #[arg(long, default_value_t = crate::verify::DEFAULT_SEED)]
    pub seed: u64,
    /// JSON report destination; stdout when absent.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}
