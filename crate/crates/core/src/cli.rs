//! Command-line front end: `calibrate`, `sweep` and `ensemble`.
//!
//! Every option can also come from a JSON config file (`--config FILE`)
//! whose keys are the long flag names; flags win on conflict and unknown
//! keys are rejected.
//!
//! Output files written to `--out DIR`:
//!
//! * `<index>.csv`: header `bin_center,density`, the histogram of the
//!   standardized series.
//! * `<index>.meta.json`: model, sample counts, mean, std, skewness, ks_d,
//!   skipped, and `fit {sigma, mu, beta, sse, moment_consistent}` when a fit
//!   was requested.
//! * `sweep.csv`: header `param,mean_degree,v_ratio,v_ratio_se` plus
//!   `analytic_v_ratio` for ERG.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ensemble::{connectivity_sweep, run_ensemble, with_workers, EnsembleSpec, SweepRow};
use crate::fit::{fit_shifted_lognormal, LogNormalFit};
use crate::indices::IndexKind;
use crate::models::{
    calibrate_erg_p, calibrate_rgg_r, solve_r_for_mean_degree, Connectivity, Model, ModelSpec, ResolvedModel,
};
use crate::rng::derived_seed;
use crate::stats::{histogram, ks_vs_standard_normal, Histogram};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] crate::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config {path}: {source}")]
    Config {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("failed indices: {}", .0.join(", "))]
    Partial(Vec<String>),
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Debug, Parser)]
#[command(name = "rgensemble", version, about = "Index distributions on random graph ensembles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the model parameter reaching a target ratio or mean degree.
    Calibrate(RunArgs),
    /// Estimate ⟨k⟩ and ⟨V⟩/n over a parameter grid and write sweep.csv.
    Sweep(RunArgs),
    /// Run an ensemble and write per-index histograms and summaries.
    Ensemble(RunArgs),
}

/// Options shared by all subcommands. Also the schema of `--config` files.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunArgs {
    /// Random graph model: erg or rgg.
    #[arg(long)]
    pub model: Option<String>,
    /// Number of vertices.
    #[arg(long)]
    pub n: Option<usize>,
    /// ERG edge probability.
    #[arg(long, group = "connectivity")]
    pub p: Option<f64>,
    /// RGG connection radius.
    #[arg(long, group = "connectivity")]
    pub r: Option<f64>,
    /// Target expected fraction of non-isolated vertices.
    #[arg(long, group = "connectivity")]
    pub ratio: Option<f64>,
    /// Target mean degree.
    #[arg(long, group = "connectivity")]
    pub mean_degree: Option<f64>,
    /// Ensemble size (or samples per grid point / validation samples).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Comma-separated index names, e.g. M1,lnNK,R1,E,lnEE.
    #[arg(long, value_delimiter = ',')]
    pub indices: Option<Vec<String>>,
    /// Histogram bins.
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; affects speed only.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Fit to apply to each standardized histogram: none or lognormal.
    #[arg(long)]
    pub fit: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with default values for any of these options.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Tolerance of the RGG ratio calibration.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Samples used by the RGG ratio calibration.
    #[arg(long)]
    pub calibration_samples: Option<usize>,
    /// Sweep grid start.
    #[arg(long)]
    pub from: Option<f64>,
    /// Sweep grid end (inclusive).
    #[arg(long)]
    pub to: Option<f64>,
    /// Number of sweep grid points.
    #[arg(long)]
    pub points: Option<usize>,
    /// Sweep axis: param (p or r) or mean-degree.
    #[arg(long)]
    pub axis: Option<String>,
}

impl RunArgs {
    /// Fills unset fields from the `--config` file, if any.
    pub fn with_config(self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = fs::read_to_string(&path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        let file: RunArgs = serde_json::from_str(&text).map_err(|source| CliError::Config { path, source })?;
        Ok(self.merge(file))
    }

    fn merge(self, file: RunArgs) -> Self {
        macro_rules! pick {
            ($($f:ident),*) => { RunArgs { $($f: self.$f.or(file.$f),)* config: self.config } };
        }
        let connectivity_from_flags =
            self.p.is_some() || self.r.is_some() || self.ratio.is_some() || self.mean_degree.is_some();
        let (p, r, ratio, mean_degree) = if connectivity_from_flags {
            (self.p, self.r, self.ratio, self.mean_degree)
        } else {
            (file.p, file.r, file.ratio, file.mean_degree)
        };
        let mut merged = pick!(
            model, n, p, r, ratio, mean_degree, samples, indices, bins, seed, workers, fit, out, tol,
            calibration_samples, from, to, points, axis
        );
        merged.p = p;
        merged.r = r;
        merged.ratio = ratio;
        merged.mean_degree = mean_degree;
        merged
    }

    fn model(&self) -> Result<Model, CliError> {
        match self.model.as_deref().map(str::to_ascii_lowercase).as_deref() {
            Some("erg") => Ok(Model::Erg),
            Some("rgg") => Ok(Model::Rgg),
            Some(other) => usage(format!("unknown model '{other}' (expected erg or rgg)")),
            None => usage("--model is required"),
        }
    }

    fn n(&self) -> Result<usize, CliError> {
        match self.n {
            Some(n) if n >= 1 => Ok(n),
            Some(_) => usage("--n must be >= 1"),
            None => usage("--n is required"),
        }
    }

    fn connectivity(&self, model: Model) -> Result<Connectivity, CliError> {
        let set: Vec<Connectivity> = [
            self.p.map(|x| (Model::Erg, "--p", Connectivity::Parameter(x))),
            self.r.map(|x| (Model::Rgg, "--r", Connectivity::Parameter(x))),
            self.ratio.map(|x| (model, "", Connectivity::NonIsolatedRatio(x))),
            self.mean_degree.map(|x| (model, "", Connectivity::MeanDegree(x))),
        ]
        .into_iter()
        .flatten()
        .map(|(m, flag, c)| {
            if m != model {
                usage(format!("{flag} does not apply to model {model}"))
            } else {
                Ok(c)
            }
        })
        .collect::<Result<_, _>>()?;
        match set.as_slice() {
            [c] => Ok(*c),
            [] => usage("one of --p, --r, --ratio, --mean-degree is required"),
            _ => usage("--p, --r, --ratio and --mean-degree are mutually exclusive"),
        }
    }

    fn model_spec(&self) -> Result<ModelSpec, CliError> {
        let model = self.model()?;
        let spec = ModelSpec {
            model,
            n: self.n()?,
            connectivity: self.connectivity(model)?,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn positive(v: Option<usize>, default: usize, flag: &str) -> Result<usize, CliError> {
        match v.unwrap_or(default) {
            0 => usage(format!("{flag} must be >= 1")),
            x => Ok(x),
        }
    }

    fn samples(&self, default: usize) -> Result<usize, CliError> {
        Self::positive(self.samples, default, "--samples")
    }

    fn workers(&self) -> Result<usize, CliError> {
        let default = std::thread::available_parallelism().map_or(1, |n| n.get());
        Self::positive(self.workers, default, "--workers")
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn tol(&self) -> Result<f64, CliError> {
        match self.tol.unwrap_or(DEFAULT_TOL) {
            t if t > 0.0 => Ok(t),
            t => usage(format!("--tol must be positive, got {t}")),
        }
    }

    fn out_dir(&self) -> Result<&Path, CliError> {
        self.out.as_deref().map_or_else(|| usage("--out is required"), Ok)
    }
}

pub const DEFAULT_BINS: usize = 100;
pub const DEFAULT_TOL: f64 = 0.005;
pub const DEFAULT_CALIBRATION_SAMPLES: usize = 10_000;

/// Report printed by `calibrate`.
#[derive(Debug, Clone, Serialize)]
pub struct CalibrationReport {
    pub model: Model,
    pub n: usize,
    /// "p" or "r".
    pub parameter: &'static str,
    pub value: f64,
    pub expected_mean_degree: f64,
    /// Monte-Carlo ⟨V⟩/n on a fresh validation ensemble.
    pub achieved_ratio: f64,
    pub standard_error: f64,
    pub validation_samples: usize,
}

pub fn cmd_calibrate(args: &RunArgs) -> Result<CalibrationReport, CliError> {
    let spec = args.model_spec()?;
    let seed = args.seed();
    let samples = args.samples(DEFAULT_CALIBRATION_SAMPLES)?;
    let value = match (spec.model, spec.connectivity) {
        (Model::Rgg, Connectivity::NonIsolatedRatio(t)) => {
            let calib_samples = args.calibration_samples.unwrap_or(DEFAULT_CALIBRATION_SAMPLES);
            calibrate_rgg_r(spec.n, t, calib_samples, args.tol()?, derived_seed(seed, 1))?.radius
        }
        (Model::Erg, Connectivity::NonIsolatedRatio(t)) => calibrate_erg_p(spec.n, t)?,
        (Model::Rgg, Connectivity::MeanDegree(k)) => solve_r_for_mean_degree(spec.n, k)?,
        (Model::Erg, Connectivity::MeanDegree(k)) => k / (spec.n - 1) as f64,
        (_, Connectivity::Parameter(x)) => x,
    };
    let resolved = ResolvedModel {
        model: spec.model,
        n: spec.n,
        param: value,
    };
    let row = with_workers(args.workers()?, || {
        connectivity_sweep(spec.model, spec.n, &[value], samples.max(2), derived_seed(seed, 2))
    })??;
    Ok(CalibrationReport {
        model: spec.model,
        n: spec.n,
        parameter: match spec.model {
            Model::Erg => "p",
            Model::Rgg => "r",
        },
        value,
        expected_mean_degree: resolved.mean_degree(),
        achieved_ratio: row[0].v_ratio,
        standard_error: row[0].v_ratio_se,
        validation_samples: samples.max(2),
    })
}

fn sweep_grid(args: &RunArgs, model: Model, n: usize) -> Result<Vec<f64>, CliError> {
    let points = RunArgs::positive(args.points, 20, "--points")?;
    let axis = args.axis.as_deref().unwrap_or("param");
    let (from, to) = match (args.from, args.to, axis) {
        (Some(a), Some(b), _) => (a, b),
        (None, None, "param") => (
            0.0,
            match model {
                Model::Erg => 1.0,
                Model::Rgg => std::f64::consts::SQRT_2,
            },
        ),
        _ => return usage("--from and --to are required together (and for --axis mean-degree)"),
    };
    let grid: Vec<f64> = if points == 1 {
        vec![from]
    } else {
        (0..points)
            .map(|i| if i == points - 1 { to } else { from + (to - from) * i as f64 / (points - 1) as f64 })
            .collect()
    };
    match axis {
        "param" => Ok(grid),
        "mean-degree" => grid
            .iter()
            .map(|&k| {
                if n < 2 {
                    return usage("mean-degree axis needs n >= 2");
                }
                Ok(match model {
                    Model::Erg => {
                        if !(k >= 0.0 && k <= (n - 1) as f64) {
                            return usage(format!("mean degree {k} outside [0, n-1]"));
                        }
                        k / (n - 1) as f64
                    }
                    Model::Rgg if k == 0.0 => 0.0,
                    Model::Rgg => solve_r_for_mean_degree(n, k)?,
                })
            })
            .collect(),
        other => usage(format!("unknown axis '{other}' (expected param or mean-degree)")),
    }
}

/// Formats sweep rows as the `sweep.csv` payload.
pub fn sweep_csv(model: Model, rows: &[SweepRow]) -> String {
    let mut out = String::from("param,mean_degree,v_ratio,v_ratio_se");
    if model == Model::Erg {
        out.push_str(",analytic_v_ratio");
    }
    out.push('\n');
    for row in rows {
        write!(out, "{},{},{},{}", row.param, row.mean_degree, row.v_ratio, row.v_ratio_se).unwrap();
        if let Some(a) = row.analytic_v_ratio {
            write!(out, ",{a}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn cmd_sweep(args: &RunArgs) -> Result<Vec<SweepRow>, CliError> {
    let model = args.model()?;
    let n = args.n()?;
    let grid = sweep_grid(args, model, n)?;
    let samples = args.samples(10_000)?;
    let out = args.out_dir()?;
    let rows = with_workers(args.workers()?, || connectivity_sweep(model, n, &grid, samples.max(2), args.seed()))??;
    create_dir(out)?;
    write_file(&out.join("sweep.csv"), &sweep_csv(model, &rows))?;
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelSummary {
    pub model: Model,
    pub n: usize,
    pub param: f64,
    pub expected_mean_degree: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitSummary {
    #[serde(flatten)]
    pub fit: LogNormalFit,
    pub moment_consistent: bool,
}

/// Contents of `<index>.meta.json`.
#[derive(Debug, Clone, Serialize)]
pub struct IndexSummary {
    pub index: String,
    pub model: ModelSummary,
    pub seed: u64,
    pub samples: usize,
    pub valid: usize,
    pub skipped: usize,
    pub bins: usize,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub skewness: Option<f64>,
    pub ks_d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct EnsembleOutcome {
    pub summaries: Vec<IndexSummary>,
    pub failed: Vec<String>,
}

fn parse_indices(args: &RunArgs) -> Result<Vec<IndexKind>, CliError> {
    let names = match &args.indices {
        Some(v) if !v.is_empty() => v,
        _ => return usage("--indices is required"),
    };
    names
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<IndexKind>().map_err(CliError::from))
        .collect()
}

fn parse_fit(args: &RunArgs) -> Result<bool, CliError> {
    match args.fit.as_deref().unwrap_or("none") {
        "none" => Ok(false),
        "lognormal" => Ok(true),
        other => usage(format!("unknown fit '{other}' (expected none or lognormal)")),
    }
}

pub fn cmd_ensemble(args: &RunArgs) -> Result<EnsembleOutcome, CliError> {
    let model = args.model_spec()?;
    let kinds = parse_indices(args)?;
    let samples = args.samples(10_000)?;
    let bins = RunArgs::positive(args.bins, DEFAULT_BINS, "--bins")?;
    let want_fit = parse_fit(args)?;
    let out = args.out_dir()?;
    let seed = args.seed();

    let mut spec = EnsembleSpec::new(model, samples, kinds, seed);
    spec.calibration_tol = args.tol()?;
    spec.calibration_samples = args.calibration_samples.unwrap_or(DEFAULT_CALIBRATION_SAMPLES);
    let result = with_workers(args.workers()?, || run_ensemble(&spec))??;

    create_dir(out)?;
    let model_summary = ModelSummary {
        model: result.model.model,
        n: result.model.n,
        param: result.model.param,
        expected_mean_degree: result.model.mean_degree(),
    };
    let mut outcome = EnsembleOutcome {
        summaries: Vec::new(),
        failed: Vec::new(),
    };
    for (kind, series) in &result.series {
        let mut summary = IndexSummary {
            index: kind.name().to_string(),
            model: model_summary.clone(),
            seed,
            samples,
            valid: series.len(),
            skipped: series.skipped,
            bins,
            mean: (!series.is_empty()).then_some(series.mean),
            std: (!series.is_empty()).then_some(series.std),
            skewness: None,
            ks_d: None,
            fit: None,
            error: None,
        };
        let analysed = series.standardize().and_then(|z| Ok((histogram(&z, bins)?, z)));
        match analysed {
            Ok((h, z)) => {
                summary.skewness = z.skewness().ok();
                summary.ks_d = ks_vs_standard_normal(&z.values).ok();
                write_file(&out.join(format!("{}.csv", kind.name())), &histogram_csv(&h))?;
                if want_fit {
                    match fit_shifted_lognormal(&h) {
                        Ok(fit) => {
                            summary.fit = Some(FitSummary {
                                moment_consistent: fit.is_moment_consistent(),
                                fit,
                            })
                        }
                        Err(e) => {
                            summary.error = Some(e.to_string());
                            outcome.failed.push(kind.name().to_string());
                        }
                    }
                }
            }
            Err(e) => {
                summary.error = Some(e.to_string());
                outcome.failed.push(kind.name().to_string());
            }
        }
        let json = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
        write_file(&out.join(format!("{}.meta.json", kind.name())), &json)?;
        outcome.summaries.push(summary);
    }
    Ok(outcome)
}

/// `bin_center,density` rows.
pub fn histogram_csv(h: &Histogram) -> String {
    let mut out = String::from("bin_center,density\n");
    for (c, d) in h.centers().iter().zip(&h.density) {
        writeln!(out, "{c},{d}").unwrap();
    }
    out
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs a parsed command line. Per-index ensemble failures are reported
/// through [`CliError::Partial`] after all other outputs are written.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Calibrate(args) => {
            let report = cmd_calibrate(&args.with_config()?)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Command::Sweep(args) => {
            let args = args.with_config()?;
            let rows = cmd_sweep(&args)?;
            eprintln!("wrote {} rows to {}", rows.len(), args.out_dir()?.join("sweep.csv").display());
        }
        Command::Ensemble(args) => {
            let outcome = cmd_ensemble(&args.with_config()?)?;
            for s in &outcome.summaries {
                if let Some(e) = &s.error {
                    eprintln!("{}: {e}", s.index);
                }
            }
            if !outcome.failed.is_empty() {
                return Err(CliError::Partial(outcome.failed));
            }
        }
    }
    Ok(())
}
