//! Monte-Carlo distributions of graph indices on Erdős–Rényi and random
//! geometric graph ensembles.
//!
//! The crate generates graphs across the connectivity transition, evaluates
//! degree-based, multiplicative, Revan-degree and spectral indices on every
//! sample, and characterizes the resulting distributions: standardization,
//! histograms, Kolmogorov–Smirnov distance to the standard normal, skewness
//! and a shifted log-normal least-squares fit.

pub mod cli;
pub mod ensemble;
pub mod error;
pub mod fit;
pub mod graph;
pub mod indices;
pub mod models;
pub mod rng;
pub mod spectral;
pub mod stats;

pub use ensemble::{connectivity_sweep, run_ensemble, run_ensemble_with_workers, EnsembleResult, EnsembleSpec, SweepRow};
pub use error::{Error, Result};
pub use fit::{fit_normal, fit_shifted_lognormal, LogNormalFit, NormalFit};
pub use graph::Graph;
pub use indices::IndexKind;
pub use models::{Connectivity, Model, ModelSpec, ResolvedModel};
pub use stats::{histogram, ks_vs_standard_normal, Histogram, SampleSeries};
