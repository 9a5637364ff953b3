//! Spectral indices of the randomly weighted adjacency matrix.
//!
//! The matrix has `√2·ε_ii` on the diagonal, `ε_ij` on edges and zero
//! elsewhere, with ε drawn from a [`WeightSource`]. Weights are consumed in
//! a fixed order: the diagonal by vertex index, then the edges in sorted
//! order. Every exponential aggregate is evaluated in log space.

use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Supplies the ε weights of the adjacency matrix.
pub trait WeightSource {
    fn next_weight(&mut self) -> f64;
}

/// Independent standard normal weights.
pub struct GaussianWeights<'a, R: Rng + ?Sized>(pub &'a mut R);

impl<R: Rng + ?Sized> WeightSource for GaussianWeights<'_, R> {
    fn next_weight(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }
}

/// Every ε equal to the same constant.
#[derive(Debug, Clone, Copy)]
pub struct ConstantWeights(pub f64);

impl WeightSource for ConstantWeights {
    fn next_weight(&mut self) -> f64 {
        self.0
    }
}

/// Replays a fixed list of weights in consumption order. Panics when exhausted.
#[derive(Debug, Clone)]
pub struct ListedWeights {
    values: Vec<f64>,
    pos: usize,
}

impl ListedWeights {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values, pos: 0 }
    }
}

impl WeightSource for ListedWeights {
    fn next_weight(&mut self) -> f64 {
        let w = self.values[self.pos];
        self.pos += 1;
        w
    }
}

/// Dense symmetric weighted adjacency matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedAdjacency {
    matrix: DMatrix<f64>,
}

impl WeightedAdjacency {
    /// Wraps an explicit matrix, rejecting non-square or non-symmetric input.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Contract("matrix is not square".into()));
        }
        let n = matrix.nrows();
        for i in 0..n {
            for j in i + 1..n {
                if matrix[(i, j)] != matrix[(j, i)] {
                    return Err(Error::Contract(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { matrix })
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            matrix: &self.matrix * c,
        }
    }
}

/// Builds the weighted adjacency of `g`, drawing one ε per diagonal entry
/// (by vertex) and then one per edge (sorted order).
pub fn weighted_adjacency<W: WeightSource + ?Sized>(g: &Graph, weights: &mut W) -> WeightedAdjacency {
    let n = g.n();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = SQRT_2 * weights.next_weight();
    }
    for &(u, v) in g.edges() {
        let w = weights.next_weight();
        a[(u as usize, v as usize)] = w;
        a[(v as usize, u as usize)] = w;
    }
    WeightedAdjacency { matrix: a }
}

/// Eigenvalues sorted in descending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: DVector<f64>,
    /// Column `j` pairs with `eigenvalues[j]`.
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    pub fn largest(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Full symmetric eigendecomposition.
pub fn eigendecompose(a: &WeightedAdjacency) -> Result<SpectralDecomposition> {
    // re-checked because the matrix may have been built outside `from_matrix`
    let a = WeightedAdjacency::from_matrix(a.matrix.clone())?;
    let n = a.n();
    if n == 0 {
        return Err(Error::Contract("empty matrix".into()));
    }
    let eig = SymmetricEigen::new(a.matrix);
    let mut order: Vec<usize> = (0..n).collect();
    // stable: tied eigenvalues keep the solver's column order
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// ln S_i, where S_i = Σ_j (Ψ_j(i))² exp(λ_j) is the subgraph centrality of
/// vertex i (the i-th diagonal entry of exp(A)).
pub fn log_subgraph_centralities(d: &SpectralDecomposition) -> Vec<f64> {
    let n = d.eigenvalues.len();
    (0..n)
        .map(|i| {
            log_sum_exp((0..n).map(|j| {
                let c = d.eigenvectors[(i, j)].abs();
                if c == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    2.0 * c.ln() + d.eigenvalues[j]
                }
            }))
        })
        .collect()
}

/// Subgraph centralities S_i. May overflow for large spectra; prefer
/// [`log_subgraph_centralities`].
pub fn subgraph_centralities(d: &SpectralDecomposition) -> Vec<f64> {
    log_subgraph_centralities(d).into_iter().map(f64::exp).collect()
}

/// x_i = (1/λ₁) Σ_j A_ij |Ψ¹_j|, evaluated literally.
///
/// With signed weights this can be negative, so RV_b built on it may be
/// non-positive. See [`leading_magnitudes`] for the variant used by
/// [`IndexKind::LnRVb`](crate::IndexKind::LnRVb).
pub fn eigenvector_centralities(a: &WeightedAdjacency, d: &SpectralDecomposition) -> Result<Vec<f64>> {
    let l1 = d.largest();
    if l1 == 0.0 {
        return Err(Error::DegenerateSpectrum("largest eigenvalue is zero".into()));
    }
    let lead = d.eigenvectors.column(0).abs();
    let ax = a.matrix() * lead;
    Ok(ax.iter().map(|v| v / l1).collect())
}

/// |Ψ¹_i|, the magnitude of the leading eigenvector. Coincides with
/// [`eigenvector_centralities`] whenever Ψ¹ has no sign changes (any
/// non-negative matrix), and stays positive for signed weights.
pub fn leading_magnitudes(d: &SpectralDecomposition) -> Vec<f64> {
    d.eigenvectors.column(0).iter().map(|v| v.abs()).collect()
}

/// The four spectral indices. RV_a, RV_b and EE are natural logarithms;
/// the energy is raw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralIndexSet {
    pub log_rv_a: f64,
    pub log_rv_b: f64,
    pub energy: f64,
    pub log_ee: f64,
}

/// Spectral indices of one matrix, including RV_b under both centrality
/// rules. The literal rule can be undefined on a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralIndices {
    pub energy: f64,
    pub log_rv_a: f64,
    pub log_ee: f64,
    /// ln Σ |Ψ¹_i| S_i.
    pub log_rv_b: Result<f64>,
    /// ln Σ x_i S_i with x from [`eigenvector_centralities`].
    pub log_rv_b_literal: Result<f64>,
}

/// ln Σ_i w_i S_i given ln S_i, for weights of any sign.
fn log_weighted_sum(weights: &[f64], log_s: &[f64]) -> Result<f64> {
    let m = log_s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: f64 = weights.iter().zip(log_s).map(|(w, ls)| w * (ls - m).exp()).sum();
    if scaled > 0.0 && scaled.is_finite() {
        Ok(m + scaled.ln())
    } else {
        Err(Error::DegenerateSpectrum(format!("RV_b is not positive (scaled sum {scaled})")))
    }
}

impl SpectralIndices {
    pub fn compute(a: &WeightedAdjacency) -> Result<Self> {
        let d = eigendecompose(a)?;
        Ok(Self::from_decomposition(a, &d))
    }

    pub fn from_decomposition(a: &WeightedAdjacency, d: &SpectralDecomposition) -> Self {
        let n = a.n() as f64;
        let energy = d.eigenvalues.iter().map(|l| l.abs()).sum();
        let log_ee = log_sum_exp(d.eigenvalues.iter().copied()) - n.ln();
        let log_s = log_subgraph_centralities(d);
        let log_rv_a = 0.5 * (log_sum_exp(log_s.iter().map(|s| 2.0 * s)) - n.ln());
        let log_rv_b = if d.largest() == 0.0 {
            Err(Error::DegenerateSpectrum("largest eigenvalue is zero".into()))
        } else {
            log_weighted_sum(&leading_magnitudes(d), &log_s)
        };
        let log_rv_b_literal = eigenvector_centralities(a, d).and_then(|x| log_weighted_sum(&x, &log_s));
        Self {
            energy,
            log_rv_a,
            log_ee,
            log_rv_b,
            log_rv_b_literal,
        }
    }
}

/// All four spectral indices; fails when RV_b is undefined.
pub fn spectral_index_set(a: &WeightedAdjacency) -> Result<SpectralIndexSet> {
    let s = SpectralIndices::compute(a)?;
    Ok(SpectralIndexSet {
        log_rv_a: s.log_rv_a,
        log_rv_b: s.log_rv_b?,
        energy: s.energy,
        log_ee: s.log_ee,
    })
}
