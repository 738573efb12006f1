//! Subcommand implementations.

use crate::cli::{LawArg, MomentsArgs, RateArgs, SampleArgs, SpectralArgs, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::io::{self, Document, Format, Header};
use crate::mc;
use crate::verify;
use betadet_core::ldp::{marginal_rate, RateResult};
use betadet_core::moments::{moment_report, MomentReport};
use betadet_core::sampler::DetProcessPath;
use betadet_core::spectral::{density_table, DensityRow, SpectralDist};
use betadet_core::EnsembleKind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const PATH_SCHEMA: &str = "path";
pub const MOMENT_SCHEMA: &str = "moments";
pub const RATE_SCHEMA: &str = "rate";
pub const SPECTRAL_SCHEMA: &str = "spectral";

/// CSV row of a sampled path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRow {
    pub path: usize,
    pub stream: u64,
    pub index: usize,
    pub time: f64,
    pub cumlog: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub ensemble: EnsembleKind,
    pub beta: f64,
    pub n: usize,
    pub p: usize,
    pub t: f64,
    pub exact_mean: f64,
    pub exact_var: f64,
    pub asymptotic_mean: f64,
    pub asymptotic_var: f64,
    pub gap_mean: f64,
    pub gap_var: f64,
}

impl From<&MomentReport> for MomentRow {
    fn from(r: &MomentReport) -> Self {
        Self {
            ensemble: r.params.kind,
            beta: r.params.beta,
            n: r.params.n,
            p: r.p,
            t: r.t,
            exact_mean: r.exact_mean,
            exact_var: r.exact_var,
            asymptotic_mean: r.asymptotic_mean,
            asymptotic_var: r.asymptotic_var,
            gap_mean: r.gap_mean,
            gap_var: r.gap_var,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub ensemble: EnsembleKind,
    #[serde(rename = "T")]
    pub big_t: f64,
    pub xi: f64,
    pub theta: Option<f64>,
    pub rate: f64,
    pub branch: betadet_core::ldp::Branch,
}

impl From<&RateResult> for RateRow {
    fn from(r: &RateResult) -> Self {
        Self { ensemble: r.ensemble, big_t: r.big_t, xi: r.xi, theta: r.theta, rate: r.rate, branch: r.branch }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SpectralSummary {
    pub law: Option<SpectralDist>,
    pub support: (f64, f64),
    pub atoms: Vec<(f64, f64)>,
    pub continuous_mass: f64,
    pub mean: f64,
    /// ∫ log x dμ; -∞ when μ has an atom at 0.
    #[serde(with = "betadet_core::ext_real")]
    pub log_moment: f64,
}

fn emit<R: Serialize, S: Serialize>(
    output: &crate::cli::OutputArgs,
    header: Header,
    rows: &[R],
    records: Vec<impl Serialize>,
    summary: S,
) -> CliResult<()> {
    let w = io::open_output(output.out.as_deref())?;
    match output.format {
        Format::Csv => io::write_csv(w, &header, rows),
        Format::Json => io::write_json(w, &Document { header, records, summary }),
    }
}

pub fn path_rows(paths: &[DetProcessPath]) -> Vec<PathRow> {
    let mut rows = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        for (k, (&t, &c)) in p.times().iter().zip(p.cumlog()).enumerate() {
            rows.push(PathRow { path: i, stream: p.stream, index: k + 1, time: t, cumlog: c });
        }
    }
    rows
}

pub fn cmd_sample(args: &SampleArgs) -> CliResult<()> {
    let params = args.ensemble.params()?;
    let paths = mc::sample_paths(&params, args.paths, args.seed)?;
    let header = Header::new(PATH_SCHEMA, Some(args.seed), args)?;
    emit(&args.output, header, &path_rows(&paths), paths, ())
}

pub fn moment_grid(params: &betadet_core::EnsembleParams, t: Option<f64>, grid: usize) -> CliResult<Vec<usize>> {
    let h = params.horizon_index();
    Ok(match t {
        Some(t) => {
            let p = params.index_at(t);
            if p == 0 || p > h {
                return Err(betadet_core::Error::Domain(format!("t = {t} gives index {p} outside 1..={h}")).into());
            }
            vec![p]
        }
        None => {
            let g = grid.clamp(1, h);
            let mut v: Vec<usize> = (1..=g).map(|k| (k * h).div_ceil(g)).collect();
            v.dedup();
            v
        }
    })
}

pub fn cmd_moments(args: &MomentsArgs) -> CliResult<()> {
    let params = args.ensemble.params()?;
    let reports: Vec<MomentReport> = moment_grid(&params, args.t, args.grid)?
        .into_iter()
        .map(|p| moment_report(&params, p))
        .collect::<Result<_, _>>()?;
    let rows: Vec<MomentRow> = reports.iter().map(MomentRow::from).collect();
    let header = Header::new(MOMENT_SCHEMA, None, args)?;
    emit(&args.output, header, &rows, reports, ())
}

pub fn xi_grid(min: f64, max: f64, steps: usize) -> CliResult<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && min <= max) || steps == 0 {
        return Err(CliError::Usage(format!("bad ξ grid [{min}, {max}] with {steps} steps")));
    }
    Ok(if steps == 1 {
        vec![min]
    } else {
        (0..steps).map(|i| min + (max - min) * i as f64 / (steps - 1) as f64).collect()
    })
}

pub fn rate_sweep(args: &RateArgs) -> CliResult<Vec<RateResult>> {
    let params = args.ensemble.params()?;
    let grid = xi_grid(args.xi_min, args.xi_max, args.xi_steps)?;
    Ok(grid.par_iter().map(|&xi| marginal_rate(&params, args.big_t, xi)).collect::<Result<_, _>>()?)
}

pub fn cmd_rate(args: &RateArgs) -> CliResult<()> {
    let results = rate_sweep(args)?;
    let rows: Vec<RateRow> = results.iter().map(RateRow::from).collect();
    let header = Header::new(RATE_SCHEMA, None, args)?;
    emit(&args.output, header, &rows, results, ())
}

pub fn spectral_law(args: &SpectralArgs) -> CliResult<SpectralDist> {
    Ok(match args.law {
        LawArg::Mp => SpectralDist::mp(args.c, args.sigma2)?,
        LawArg::Mckay => SpectralDist::mckay(args.a_minus, args.a_plus)?,
        LawArg::Cc => SpectralDist::cc(args.u, args.v)?,
    })
}

pub fn spectral_table(args: &SpectralArgs) -> CliResult<(Vec<DensityRow>, SpectralSummary)> {
    let law = spectral_law(args)?;
    let (lo, hi) = law.support();
    let k = args.points.max(2);
    let grid: Vec<f64> = (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect();
    let rows = density_table(&law, &grid);
    let atoms = law.atoms();
    let log_moment = law.expect(|x| x.ln());
    let summary = SpectralSummary {
        law: Some(law),
        support: (lo, hi),
        atoms,
        continuous_mass: law.continuous_mass(),
        mean: law.expect(|x| x),
        log_moment,
    };
    Ok((rows, summary))
}

pub fn cmd_spectral(args: &SpectralArgs) -> CliResult<()> {
    let (rows, summary) = spectral_table(args)?;
    let header = Header::new(SPECTRAL_SCHEMA, None, args)?;
    let w = io::open_output(args.output.out.as_deref())?;
    match args.output.format {
        Format::Csv => io::write_csv(w, &header, &rows),
        Format::Json => io::write_json(w, &Document { header, records: rows, summary }),
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let report = verify::run(args.only.as_deref(), args.seed)?;
    for c in &report.criteria {
        eprintln!("{}", c.line());
    }
    let header = Header::new(verify::REPORT_SCHEMA, Some(args.seed), args)?;
    let w = io::open_output(args.out.as_deref())?;
    io::write_json(w, &Document { header, records: report.criteria.clone(), summary: report.passed })?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<String> = report.criteria.iter().filter(|c| !c.pass).map(|c| c.id.to_string()).collect();
        Err(CliError::VerifyFailed(format!("criteria {} failed", failed.join(", "))))
    }
}
