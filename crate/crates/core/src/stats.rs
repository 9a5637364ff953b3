//! Sample series, standardization, histograms and normality statistics.

use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::indices::IndexKind;

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Values of one index over an ensemble, with the count of samples on which
/// the index was undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSeries {
    pub kind: IndexKind,
    pub values: Vec<f64>,
    pub skipped: usize,
    pub mean: f64,
    /// Sample standard deviation (divisor len − 1); 0 for fewer than two values.
    pub std: f64,
}

impl SampleSeries {
    pub fn new(kind: IndexKind, values: Vec<f64>, skipped: usize) -> Self {
        let (mean, std) = mean_std(&values);
        Self {
            kind,
            values,
            skipped,
            mean,
            std,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Total samples attempted.
    pub fn attempted(&self) -> usize {
        self.values.len() + self.skipped
    }

    /// (x − mean) / std for every value.
    pub fn standardize(&self) -> Result<SampleSeries> {
        if self.values.len() < 2 {
            return Err(Error::DegenerateSeries(format!(
                "{}: need at least two values to standardize, have {}",
                self.kind,
                self.values.len()
            )));
        }
        if !(self.std > 0.0) {
            return Err(Error::DegenerateSeries(format!("{}: zero variance", self.kind)));
        }
        let values = self.values.iter().map(|x| (x - self.mean) / self.std).collect();
        Ok(SampleSeries::new(self.kind, values, self.skipped))
    }

    /// Third standardized central moment, m3 / m2^(3/2).
    pub fn skewness(&self) -> Result<f64> {
        skewness(&self.values)
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|x| (x - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

pub fn skewness(values: &[f64]) -> Result<f64> {
    if values.len() < 3 {
        return Err(Error::DegenerateSeries("skewness needs at least three values".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (m2, m3) = values.iter().fold((0.0, 0.0), |(a, b), x| {
        let d = x - mean;
        (a + d * d, b + d * d * d)
    });
    let (m2, m3) = (m2 / n, m3 / n);
    if !(m2 > 0.0) {
        return Err(Error::DegenerateSeries("skewness of a constant series".into()));
    }
    Ok(m3 / m2.powf(1.5))
}

/// Equal-width histogram normalized to unit integral.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// Strictly increasing, `density.len() + 1` entries.
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
}

impl Histogram {
    /// Histogram of `values` over `bins` equal-width bins spanning [min, max].
    /// The maximum falls in the last bin.
    pub fn from_values(values: &[f64], bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::Parameter("bin count must be >= 1".into()));
        }
        if values.is_empty() {
            return Err(Error::DegenerateSeries("cannot histogram an empty series".into()));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::DegenerateSeries("series contains non-finite values".into()));
        }
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(hi > lo) {
            return Err(Error::DegenerateSeries("all values equal; histogram has zero width".into()));
        }
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0usize; bins];
        for &x in values {
            let b = (((x - lo) / width).floor() as usize).min(bins - 1);
            counts[b] += 1;
        }
        let edges: Vec<f64> = (0..=bins)
            .map(|i| if i == bins { hi } else { lo + width * i as f64 })
            .collect();
        let total = values.len() as f64;
        let density = counts
            .iter()
            .zip(edges.windows(2))
            .map(|(&c, e)| c as f64 / (total * (e[1] - e[0])))
            .collect();
        Ok(Self { edges, density })
    }

    /// Histogram from explicit edges and densities, e.g. a tabulated curve.
    /// Densities are not required to integrate to one.
    pub fn from_parts(edges: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        if edges.len() != density.len() + 1 || density.is_empty() {
            return Err(Error::Parameter("need len(edges) == len(density) + 1 >= 2".into()));
        }
        if edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Parameter("edges must be strictly increasing".into()));
        }
        if density.iter().any(|d| !(*d >= 0.0)) {
            return Err(Error::Parameter("densities must be non-negative".into()));
        }
        Ok(Self { edges, density })
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Σ density · width.
    pub fn integral(&self) -> f64 {
        self.density.iter().zip(self.widths()).map(|(d, w)| d * w).sum()
    }
}

pub fn histogram(s: &SampleSeries, bins: usize) -> Result<Histogram> {
    Histogram::from_values(&s.values, bins)
}

/// Kolmogorov–Smirnov distance sup |F̂ − Φ| between the empirical CDF of
/// `values` and the standard normal CDF.
pub fn ks_vs_standard_normal(values: &[f64]) -> Result<f64> {
    if values.len() < 10 {
        return Err(Error::DegenerateSeries(format!(
            "KS statistic needs at least 10 values, have {}",
            values.len()
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = normal_cdf(x);
        d.max((i + 1) as f64 / n - f).max(f - i as f64 / n)
    }))
}
