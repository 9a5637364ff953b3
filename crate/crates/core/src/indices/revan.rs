//! Revan vertex degrees r_u = Δ + δ − d_u and the Revan indices built on them.
//!
//! Δ and δ are taken over non-isolated vertices, and isolated vertices take
//! no part in any Revan index. With that convention r_u ≥ δ ≥ 1 on every
//! edge endpoint, so RR and RH stay finite in sparse graphs.

use super::degree::{edge_term, log_edge_term, log_vertex_term};
use super::IndexKind;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevanDegrees {
    pub delta_max: u32,
    /// Minimum degree over non-isolated vertices.
    pub delta_min: u32,
    /// Revan degree per vertex; `None` for isolated vertices.
    pub r: Vec<Option<u32>>,
}

impl RevanDegrees {
    pub fn new(g: &Graph) -> Result<Self> {
        if g.edge_count() == 0 {
            return Err(Error::DegenerateInput(
                "Revan degrees are undefined on an edgeless graph".into(),
            ));
        }
        let d = g.degrees();
        let delta_max = *d.iter().max().unwrap();
        let delta_min = d.iter().copied().filter(|&x| x > 0).min().unwrap();
        let r = d
            .iter()
            .map(|&x| (x > 0).then(|| delta_max + delta_min - x))
            .collect();
        Ok(Self {
            delta_max,
            delta_min,
            r,
        })
    }

    fn at(&self, u: u32) -> f64 {
        // edge endpoints are never isolated
        self.r[u as usize].unwrap() as f64
    }

    fn nonisolated(&self) -> impl Iterator<Item = f64> + '_ {
        self.r.iter().flatten().map(|&x| x as f64)
    }

    /// Revan sum index (R1, R2, RSO, RR, RH as edge sums, or R1vertex = Σ r_u²).
    pub fn sum_index(&self, g: &Graph, kind: IndexKind) -> Result<f64> {
        match kind {
            IndexKind::R1Vertex => Ok(self.nonisolated().map(|x| x * x).sum()),
            IndexKind::R1 | IndexKind::R2 | IndexKind::RSO | IndexKind::RR | IndexKind::RH => Ok(g
                .edges()
                .iter()
                .map(|&(u, v)| edge_term(kind, self.at(u), self.at(v)).unwrap())
                .sum()),
            _ => Err(Error::Parameter(format!("{kind} is not a Revan sum index"))),
        }
    }

    /// Natural logarithm of a Revan multiplicative index.
    pub fn log_multiplicative_index(&self, g: &Graph, kind: IndexKind) -> Result<f64> {
        match kind {
            IndexKind::RNK | IndexKind::R1Pi => Ok(self
                .nonisolated()
                .map(|x| log_vertex_term(kind, x).unwrap())
                .sum()),
            IndexKind::R1PiStar | IndexKind::R2Pi | IndexKind::RRPi | IndexKind::RHPi => Ok(g
                .edges()
                .iter()
                .map(|&(u, v)| log_edge_term(kind, self.at(u), self.at(v)).unwrap())
                .sum()),
            _ => Err(Error::Parameter(format!("{kind} is not a Revan multiplicative index"))),
        }
    }

    pub(crate) fn evaluate(&self, g: &Graph, kind: IndexKind) -> Result<f64> {
        match kind.arity() {
            super::Arity::EdgeSum | super::Arity::VertexSum => self.sum_index(g, kind),
            _ => self.log_multiplicative_index(g, kind),
        }
    }
}

/// Revan degrees of `g`; errors on an edgeless graph.
pub fn revan_degrees(g: &Graph) -> Result<RevanDegrees> {
    RevanDegrees::new(g)
}

pub fn revan_sum_index(g: &Graph, kind: IndexKind) -> Result<f64> {
    RevanDegrees::new(g)?.sum_index(g, kind)
}

pub fn revan_log_multiplicative_index(g: &Graph, kind: IndexKind) -> Result<f64> {
    RevanDegrees::new(g)?.log_multiplicative_index(g, kind)
}
