//! Simple undirected graphs stored as an edge list plus a degree vector.

use crate::error::{param_err, Result};

/// A simple undirected graph on vertices `0..n`.
///
/// Edges are stored with `u < v`, sorted lexicographically. Adjacency
/// matrices are only built by the spectral module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    degrees: Vec<u32>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            degrees: vec![0; n],
        }
    }

    /// Builds a graph from an arbitrary edge list, rejecting self-loops,
    /// duplicates and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n > u32::MAX as usize {
            return param_err(format!("vertex count {n} exceeds u32 range"));
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return param_err(format!("edge ({a}, {b}) out of range for n={n}"));
            }
            if a == b {
                return param_err(format!("self-loop at vertex {a}"));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push((u as u32, v as u32));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return param_err(format!("duplicate edge ({}, {})", w[0].0, w[0].1));
        }
        Ok(Self::from_sorted_unchecked(n, list))
    }

    /// `edges` must already be sorted, deduplicated, loop-free, with `u < v < n`.
    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<(u32, u32)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let mut degrees = vec![0u32; n];
        for &(u, v) in &edges {
            debug_assert!(u < v && (v as usize) < n);
            degrees[u as usize] += 1;
            degrees[v as usize] += 1;
        }
        Self { n, edges, degrees }
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((u, v));
            }
        }
        Self::from_sorted_unchecked(n, edges)
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Self {
        let edges = (1..n as u32).map(|v| (v - 1, v)).collect();
        Self::from_sorted_unchecked(n, edges)
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return param_err(format!("cycle needs n >= 3, got {n}"));
        }
        Self::from_edges(n, (0..n).map(|u| (u, (u + 1) % n)))
    }

    /// Star with one center (vertex 0) and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges = (1..=leaves as u32).map(|v| (0, v)).collect();
        Self::from_sorted_unchecked(leaves + 1, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, u: usize) -> u32 {
        self.degrees[u]
    }

    /// Same graph with `extra` isolated vertices appended.
    pub fn with_isolated(&self, extra: usize) -> Self {
        let mut g = self.clone();
        g.n += extra;
        g.degrees.resize(g.n, 0);
        g
    }

    /// Checks every structural invariant. Used by tests and debug paths.
    pub fn validate(&self) -> Result<()> {
        if self.degrees.len() != self.n {
            return param_err("degree vector length differs from n");
        }
        let mut deg = vec![0u32; self.n];
        for w in self.edges.windows(2) {
            if w[0] >= w[1] {
                return param_err("edges not strictly sorted (duplicate or unordered)");
            }
        }
        for &(u, v) in &self.edges {
            if u >= v || v as usize >= self.n {
                return param_err(format!("bad edge ({u}, {v})"));
            }
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        if deg != self.degrees {
            return param_err("degree vector inconsistent with edges");
        }
        if self.n > 0 && deg.iter().any(|&d| d as usize > self.n - 1) {
            return param_err("degree exceeds n-1");
        }
        Ok(())
    }
}
