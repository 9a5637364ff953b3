//! Erdős–Rényi and random geometric graph generators, plus calibration of
//! their connectivity parameters to target regimes.

use std::f64::consts::{PI, SQRT_2};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param_err, Error, Result};
use crate::graph::Graph;
use crate::rng::{derived_seed, sample_stream};

/// Random graph model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Erdős–Rényi G(n, p).
    Erg,
    /// Random geometric graph on the unit square with radius r.
    Rgg,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Erg => "erg",
            Model::Rgg => "rgg",
        })
    }
}

/// How the connectivity of a model is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    /// The model's own parameter: p for ERG, r for RGG.
    Parameter(f64),
    /// Target mean degree ⟨k⟩.
    MeanDegree(f64),
    /// Target expected fraction of non-isolated vertices ⟨V⟩/n.
    NonIsolatedRatio(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: Model,
    pub n: usize,
    pub connectivity: Connectivity,
}

/// Monte-Carlo settings used when an RGG ratio target must be calibrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationOptions {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        Self {
            samples: 10_000,
            tol: 0.005,
            seed: 0,
        }
    }
}

/// A model with its raw parameter resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedModel {
    pub model: Model,
    pub n: usize,
    /// p for ERG, r for RGG.
    pub param: f64,
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return param_err("n must be >= 1");
        }
        match self.connectivity {
            Connectivity::Parameter(x) => check_param(self.model, x),
            Connectivity::MeanDegree(k) => {
                if !(k > 0.0) || k > (self.n - 1) as f64 {
                    return param_err(format!(
                        "mean degree must lie in (0, n-1] = (0, {}], got {k}",
                        self.n - 1
                    ));
                }
                Ok(())
            }
            Connectivity::NonIsolatedRatio(t) => {
                if self.n < 2 {
                    return param_err("ratio target needs n >= 2");
                }
                check_ratio(t)
            }
        }
    }

    /// Resolves the connectivity setting to the model's raw parameter.
    pub fn resolve(&self, calib: CalibrationOptions) -> Result<ResolvedModel> {
        self.validate()?;
        let param = match (self.model, self.connectivity) {
            (_, Connectivity::Parameter(x)) => x,
            (Model::Erg, Connectivity::MeanDegree(k)) => k / (self.n - 1) as f64,
            (Model::Rgg, Connectivity::MeanDegree(k)) => solve_r_for_mean_degree(self.n, k)?,
            (Model::Erg, Connectivity::NonIsolatedRatio(t)) => calibrate_erg_p(self.n, t)?,
            (Model::Rgg, Connectivity::NonIsolatedRatio(t)) => {
                calibrate_rgg_r(self.n, t, calib.samples, calib.tol, calib.seed)?.radius
            }
        };
        Ok(ResolvedModel {
            model: self.model,
            n: self.n,
            param,
        })
    }
}

impl ResolvedModel {
    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Graph> {
        match self.model {
            Model::Erg => generate_erg(self.n, self.param, rng),
            Model::Rgg => generate_rgg(self.n, self.param, rng),
        }
    }

    /// Expected mean degree: p(n-1) or g(r)(n-1).
    pub fn mean_degree(&self) -> f64 {
        let factor = match self.model {
            Model::Erg => self.param,
            Model::Rgg => rgg_mean_degree_factor(self.param).unwrap_or(f64::NAN),
        };
        factor * (self.n.saturating_sub(1)) as f64
    }
}

fn check_param(model: Model, x: f64) -> Result<()> {
    match model {
        Model::Erg if !(0.0..=1.0).contains(&x) => param_err(format!("p must lie in [0, 1], got {x}")),
        Model::Rgg if !(0.0..=SQRT_2).contains(&x) => {
            param_err(format!("r must lie in [0, sqrt(2)], got {x}"))
        }
        _ => Ok(()),
    }
}

fn check_ratio(t: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return param_err(format!("non-isolated ratio must lie in (0, 1), got {t}"));
    }
    Ok(())
}

/// Samples G(n, p). Pairs are visited in lexicographic order with geometric
/// skips between successes, so the cost is proportional to the edge count.
pub fn generate_erg<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    check_param(Model::Erg, p)?;
    if n == 0 {
        return param_err("n must be >= 1");
    }
    if p == 0.0 || n < 2 {
        return Ok(Graph::empty(n));
    }
    if p == 1.0 {
        return Ok(Graph::complete(n));
    }
    let log_q = (-p).ln_1p();
    let pairs = n * (n - 1) / 2;
    let mut edges = Vec::with_capacity(((pairs as f64) * p * 1.1) as usize + 8);
    // (u, v) is the current pair; v == u marks "before the first pair of row u".
    let mut u = 0usize;
    let mut v = 0usize;
    loop {
        let r: f64 = rng.random();
        let skip = ((1.0 - r).ln() / log_q).floor();
        // skip may be huge or +inf when p is tiny
        let mut step = if skip >= pairs as f64 { pairs + 1 } else { skip as usize + 1 };
        loop {
            let remaining_in_row = n - 1 - v;
            if step <= remaining_in_row {
                v += step;
                break;
            }
            step -= remaining_in_row;
            u += 1;
            v = u;
            if u >= n - 1 {
                return Ok(Graph::from_sorted_unchecked(n, edges));
            }
        }
        edges.push((u as u32, v as u32));
    }
}

/// Samples a random geometric graph: `n` uniform points in the unit square,
/// an edge wherever the Euclidean distance is at most `r`.
pub fn generate_rgg<R: Rng + ?Sized>(n: usize, r: f64, rng: &mut R) -> Result<Graph> {
    check_param(Model::Rgg, r)?;
    if n == 0 {
        return param_err("n must be >= 1");
    }
    let points = sample_points(n, rng);
    Ok(geometric_graph(&points, r))
}

fn sample_points<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<(f64, f64)> {
    (0..n).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect()
}

fn geometric_graph(points: &[(f64, f64)], r: f64) -> Graph {
    let r2 = r * r;
    let mut edges = Vec::new();
    for (u, &(xu, yu)) in points.iter().enumerate() {
        for (v, &(xv, yv)) in points.iter().enumerate().skip(u + 1) {
            let (dx, dy) = (xu - xv, yu - yv);
            if dx * dx + dy * dy <= r2 {
                edges.push((u as u32, v as u32));
            }
        }
    }
    Graph::from_sorted_unchecked(points.len(), edges)
}

/// Probability that two uniform points of the unit square lie within
/// distance `r`, so that an RGG has mean degree g(r)(n-1).
pub fn rgg_mean_degree_factor(r: f64) -> Result<f64> {
    check_param(Model::Rgg, r)?;
    Ok(g_unchecked(r))
}

fn g_unchecked(r: f64) -> f64 {
    if r <= 1.0 {
        g_inner_branch(r)
    } else {
        g_outer_branch(r)
    }
}

fn g_inner_branch(r: f64) -> f64 {
    r * r * (PI - 8.0 / 3.0 * r + 0.5 * r * r)
}

fn g_outer_branch(r: f64) -> f64 {
    let r2 = r * r;
    let inv = (1.0 / r).clamp(-1.0, 1.0);
    let root = (r2 - 1.0).max(0.0).sqrt();
    1.0 / 3.0 - 2.0 * r2 * (1.0 - inv.asin() + inv.acos()) + 4.0 / 3.0 * (2.0 * r2 + 1.0) * root
        - 0.5 * r2 * r2
}

/// Both branches of g evaluated at the same radius, for continuity checks.
pub fn rgg_factor_branches(r: f64) -> (f64, f64) {
    (g_inner_branch(r), g_outer_branch(r))
}

/// Closed-form p such that E[V]/n = 1 - (1-p)^(n-1) equals `t`.
pub fn calibrate_erg_p(n: usize, t: f64) -> Result<f64> {
    if n < 2 {
        return param_err("calibration needs n >= 2");
    }
    check_ratio(t)?;
    Ok(-((1.0 - t).ln() / (n - 1) as f64).exp_m1())
}

/// Analytic ERG non-isolated ratio 1 - (1-p)^(n-1).
pub fn erg_nonisolated_ratio(n: usize, p: f64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    -(((n - 1) as f64) * (-p).ln_1p()).exp_m1()
}

/// Result of an RGG radius calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RggCalibration {
    pub radius: f64,
    /// Monte-Carlo ⟨V⟩/n at `radius` on the calibration ensemble.
    pub estimate: f64,
    pub iterations: usize,
}

const RGG_BISECTION_CAP: usize = 200;

/// Bisection on r against a Monte-Carlo estimate of ⟨V⟩/n.
///
/// All bisection steps share the same `samples` point sets (common random
/// numbers), which makes the estimate exactly monotone in r. A vertex is
/// non-isolated at radius r iff its nearest-neighbour distance is ≤ r, so
/// nearest-neighbour distances are computed once and each step only counts.
pub fn calibrate_rgg_r(n: usize, t: f64, samples: usize, tol: f64, seed: u64) -> Result<RggCalibration> {
    if n < 2 {
        return param_err("calibration needs n >= 2");
    }
    check_ratio(t)?;
    if samples < 1000 {
        return param_err(format!("calibration needs >= 1000 samples, got {samples}"));
    }
    if !(tol > 0.0) {
        return param_err("tolerance must be positive");
    }
    let calib_seed = derived_seed(seed, 0xCA1B);
    let mut nn: Vec<f64> = Vec::with_capacity(n * samples);
    for m in 0..samples {
        let mut rng = sample_stream(calib_seed, m as u64);
        let pts = sample_points(n, &mut rng);
        nn.extend(nearest_neighbour_distances(&pts));
    }
    nn.sort_unstable_by(f64::total_cmp);
    let total = nn.len() as f64;
    let estimate = |r: f64| nn.partition_point(|&d| d <= r) as f64 / total;

    let (mut lo, mut hi) = (0.0f64, SQRT_2);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for it in 1..=RGG_BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        let est = estimate(mid);
        if (est - t).abs() < best.0 {
            best = ((est - t).abs(), mid, est);
        }
        if (est - t).abs() <= tol {
            return Ok(RggCalibration {
                radius: mid,
                estimate: est,
                iterations: it,
            });
        }
        if est < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Calibration {
        lo,
        hi,
        estimate: best.2,
    })
}

fn nearest_neighbour_distances(points: &[(f64, f64)]) -> Vec<f64> {
    let mut best = vec![f64::INFINITY; points.len()];
    for u in 0..points.len() {
        let (xu, yu) = points[u];
        for v in u + 1..points.len() {
            let (dx, dy) = (xu - points[v].0, yu - points[v].1);
            let d2 = dx * dx + dy * dy;
            if d2 < best[u] {
                best[u] = d2;
            }
            if d2 < best[v] {
                best[v] = d2;
            }
        }
    }
    best.into_iter().map(f64::sqrt).collect()
}

/// Inverts ⟨k⟩ = g(r)(n-1) by bisection on the increasing g.
pub fn solve_r_for_mean_degree(n: usize, k: f64) -> Result<f64> {
    if n < 2 {
        return param_err("mean degree target needs n >= 2");
    }
    let max = (n - 1) as f64;
    if !(k > 0.0) || k > max {
        return param_err(format!("mean degree must lie in (0, {max}], got {k}"));
    }
    let target = k / max;
    if target == 1.0 {
        return Ok(SQRT_2);
    }
    let (mut lo, mut hi) = (0.0f64, SQRT_2);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let g = g_unchecked(mid);
        if (g - target).abs() <= 1e-12 || hi - lo <= f64::EPSILON {
            return Ok(mid);
        }
        if g < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
