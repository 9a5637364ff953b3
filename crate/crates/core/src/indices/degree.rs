//! Degree-based sum indices and logarithms of multiplicative indices.
//!
//! Vertex products (NK, Π1) run over non-isolated vertices only, so a
//! sparse graph still has a finite logarithm. Empty sums are 0 and empty
//! products are 1 (logarithm 0).

use std::f64::consts::LN_2;

use super::IndexKind;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Number of vertices with degree ≥ 1.
pub fn nonisolated_count(g: &Graph) -> usize {
    g.degrees().iter().filter(|&&d| d > 0).count()
}

/// Edge function of a sum index, applied to the endpoint degrees.
pub(crate) fn edge_term(kind: IndexKind, a: f64, b: f64) -> Option<f64> {
    use IndexKind::*;
    Some(match kind {
        M1 | R1 => a + b,
        M2 | R2 => a * b,
        SO | RSO => a.hypot(b),
        R | RR => 1.0 / (a * b).sqrt(),
        H | RH => 2.0 / (a + b),
        _ => return None,
    })
}

/// Logarithm of the edge factor of an edge-product index.
pub(crate) fn log_edge_term(kind: IndexKind, a: f64, b: f64) -> Option<f64> {
    use IndexKind::*;
    Some(match kind {
        Pi2 | R2Pi => (a * b).ln(),
        Pi1Star | R1PiStar => (a + b).ln(),
        RPi | RRPi => -0.5 * (a * b).ln(),
        HPi | RHPi => LN_2 - (a + b).ln(),
        _ => return None,
    })
}

/// Logarithm of the vertex factor of a vertex-product index.
pub(crate) fn log_vertex_term(kind: IndexKind, a: f64) -> Option<f64> {
    use IndexKind::*;
    Some(match kind {
        NK | RNK => a.ln(),
        Pi1 | R1Pi => 2.0 * a.ln(),
        _ => return None,
    })
}

/// Σ over edges of the kind's edge function: M1, M2, SO, R or H.
pub fn sum_index(g: &Graph, kind: IndexKind) -> Result<f64> {
    if !matches!(kind, IndexKind::M1 | IndexKind::M2 | IndexKind::SO | IndexKind::R | IndexKind::H) {
        return Err(Error::Parameter(format!("{kind} is not a degree sum index")));
    }
    let d = g.degrees();
    Ok(g.edges()
        .iter()
        .map(|&(u, v)| edge_term(kind, d[u as usize] as f64, d[v as usize] as f64).unwrap())
        .sum())
}

/// Natural logarithm of a multiplicative index, accumulated as a sum of logs.
pub fn log_multiplicative_index(g: &Graph, kind: IndexKind) -> Result<f64> {
    let d = g.degrees();
    match kind {
        IndexKind::NK | IndexKind::Pi1 => Ok(d
            .iter()
            .filter(|&&x| x > 0)
            .map(|&x| log_vertex_term(kind, x as f64).unwrap())
            .sum()),
        IndexKind::Pi2 | IndexKind::Pi1Star | IndexKind::RPi | IndexKind::HPi => Ok(g
            .edges()
            .iter()
            .map(|&(u, v)| log_edge_term(kind, d[u as usize] as f64, d[v as usize] as f64).unwrap())
            .sum()),
        _ => Err(Error::Parameter(format!("{kind} is not a degree multiplicative index"))),
    }
}

pub(crate) fn evaluate(g: &Graph, kind: IndexKind) -> Result<f64> {
    match kind {
        IndexKind::VCount => Ok(nonisolated_count(g) as f64),
        IndexKind::M1 | IndexKind::M2 | IndexKind::SO | IndexKind::R | IndexKind::H => sum_index(g, kind),
        _ => log_multiplicative_index(g, kind),
    }
}
