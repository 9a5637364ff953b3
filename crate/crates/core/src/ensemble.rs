//! Monte-Carlo ensembles of index values and connectivity sweeps.
//!
//! Sample `m` draws its graph, and then any spectral weights, from
//! [`sample_stream`]`(master_seed, m)`, and results are assembled in sample
//! order, so output is identical for any number of workers.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{param_err, Error, Result};
use crate::graph::Graph;
use crate::indices::{degree, revan::RevanDegrees, Family, IndexKind};
use crate::models::{erg_nonisolated_ratio, CalibrationOptions, Model, ModelSpec, ResolvedModel};
use crate::rng::{derived_seed, sample_stream};
use crate::spectral::{weighted_adjacency, GaussianWeights, SpectralIndices};
use crate::stats::SampleSeries;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub model: ModelSpec,
    pub samples: usize,
    pub indices: Vec<IndexKind>,
    pub master_seed: u64,
    /// Used only when an RGG ratio target needs Monte-Carlo calibration.
    /// The calibration seed is derived from `master_seed`.
    pub calibration_samples: usize,
    pub calibration_tol: f64,
}

impl EnsembleSpec {
    pub fn new(model: ModelSpec, samples: usize, indices: Vec<IndexKind>, master_seed: u64) -> Self {
        let defaults = CalibrationOptions::default();
        Self {
            model,
            samples,
            indices,
            master_seed,
            calibration_samples: defaults.samples,
            calibration_tol: defaults.tol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.samples < 1 {
            return param_err("sample count must be >= 1");
        }
        if self.indices.is_empty() {
            return param_err("at least one index kind is required");
        }
        Ok(())
    }

    pub fn resolve_model(&self) -> Result<ResolvedModel> {
        self.model.resolve(CalibrationOptions {
            samples: self.calibration_samples,
            tol: self.calibration_tol,
            seed: derived_seed(self.master_seed, 1),
        })
    }
}

#[derive(Debug, Clone)]
pub struct EnsembleResult {
    pub model: ResolvedModel,
    pub series: BTreeMap<IndexKind, SampleSeries>,
}

/// Runs the ensemble on the current rayon pool.
pub fn run_ensemble(spec: &EnsembleSpec) -> Result<EnsembleResult> {
    spec.validate()?;
    let model = spec.resolve_model()?;
    let mut kinds = spec.indices.clone();
    kinds.sort();
    kinds.dedup();

    let rows: Vec<Vec<Option<f64>>> = (0..spec.samples)
        .into_par_iter()
        .map(|m| evaluate_sample(&model, &kinds, spec.master_seed, m as u64))
        .collect::<Result<_>>()?;

    let series = kinds
        .iter()
        .enumerate()
        .map(|(col, &kind)| {
            let values: Vec<f64> = rows.iter().filter_map(|r| r[col]).collect();
            let skipped = spec.samples - values.len();
            (kind, SampleSeries::new(kind, values, skipped))
        })
        .collect();
    Ok(EnsembleResult { model, series })
}

/// Runs the ensemble on a dedicated pool of `workers` threads.
pub fn run_ensemble_with_workers(spec: &EnsembleSpec, workers: usize) -> Result<EnsembleResult> {
    with_workers(workers, || run_ensemble(spec))?
}

pub(crate) fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return param_err("worker count must be >= 1");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Index values of one sample; `None` marks a degenerate sample for that kind.
pub fn evaluate_sample(model: &ResolvedModel, kinds: &[IndexKind], seed: u64, m: u64) -> Result<Vec<Option<f64>>> {
    let mut rng = sample_stream(seed, m);
    let g = model.generate(&mut rng)?;
    let needs = |fam: Family| kinds.iter().any(|k| k.family() == fam);

    let revan = if needs(Family::Revan) {
        RevanDegrees::new(&g).ok()
    } else {
        None
    };
    let spectral = if needs(Family::Spectral) {
        let a = weighted_adjacency(&g, &mut GaussianWeights(&mut rng));
        Some(SpectralIndices::compute(&a)?)
    } else {
        None
    };

    kinds
        .iter()
        .map(|&kind| -> Result<Option<f64>> {
            Ok(match kind.family() {
                Family::Degree => Some(degree::evaluate(&g, kind)?),
                Family::Revan => match &revan {
                    Some(rd) => Some(rd.evaluate(&g, kind)?),
                    None => None,
                },
                Family::Spectral => {
                    let s = spectral.as_ref().unwrap();
                    match kind {
                        IndexKind::Energy => Some(s.energy),
                        IndexKind::LnRVa => Some(s.log_rv_a),
                        IndexKind::LnEE => Some(s.log_ee),
                        IndexKind::LnRVb => s.log_rv_b.as_ref().ok().copied(),
                        IndexKind::LnRVbLiteral => s.log_rv_b_literal.as_ref().ok().copied(),
                        _ => unreachable!("non-spectral kind in spectral family"),
                    }
                }
            })
        })
        .collect()
}

/// One grid point of a connectivity sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// p for ERG, r for RGG.
    pub param: f64,
    /// Monte-Carlo mean degree.
    pub mean_degree: f64,
    /// Monte-Carlo ⟨V⟩/n.
    pub v_ratio: f64,
    /// Standard error of `v_ratio` over the samples.
    pub v_ratio_se: f64,
    /// 1 − (1 − p)^(n−1), ERG only.
    pub analytic_v_ratio: Option<f64>,
}

/// Estimates ⟨k⟩ and ⟨V⟩/n at each raw parameter of `grid`.
///
/// Grid point `i` uses the master seed `derived_seed(seed, i)`.
pub fn connectivity_sweep(model: Model, n: usize, grid: &[f64], samples: usize, seed: u64) -> Result<Vec<SweepRow>> {
    if n < 1 {
        return param_err("n must be >= 1");
    }
    if samples < 2 {
        return param_err("sweep needs at least two samples per grid point");
    }
    let models: Vec<ResolvedModel> = grid
        .iter()
        .map(|&x| {
            ModelSpec {
                model,
                n,
                connectivity: crate::models::Connectivity::Parameter(x),
            }
            .resolve(CalibrationOptions::default())
        })
        .collect::<Result<_>>()?;

    models
        .iter()
        .enumerate()
        .map(|(i, rm)| {
            let point_seed = derived_seed(seed, i as u64);
            let stats: Vec<(f64, f64)> = (0..samples)
                .into_par_iter()
                .map(|m| {
                    let g = rm.generate(&mut sample_stream(point_seed, m as u64))?;
                    Ok(sample_connectivity(&g))
                })
                .collect::<Result<_>>()?;
            let count = samples as f64;
            let mean_degree = stats.iter().map(|s| s.0).sum::<f64>() / count;
            let v_ratio = stats.iter().map(|s| s.1).sum::<f64>() / count;
            let var = stats.iter().map(|s| (s.1 - v_ratio).powi(2)).sum::<f64>() / (count - 1.0);
            Ok(SweepRow {
                param: rm.param,
                mean_degree,
                v_ratio,
                v_ratio_se: (var / count).sqrt(),
                analytic_v_ratio: (model == Model::Erg).then(|| erg_nonisolated_ratio(n, rm.param)),
            })
        })
        .collect()
}

/// (mean degree, non-isolated fraction) of one graph.
fn sample_connectivity(g: &Graph) -> (f64, f64) {
    let n = g.n() as f64;
    (2.0 * g.edge_count() as f64 / n, degree::nonisolated_count(g) as f64 / n)
}
