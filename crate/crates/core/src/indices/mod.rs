//! Index kinds and their evaluation on a single graph.

pub mod degree;
pub mod revan;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How an index aggregates its per-vertex or per-edge terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arity {
    VertexSum,
    EdgeSum,
    VertexProduct,
    EdgeProduct,
    /// Computed from the weighted adjacency spectrum.
    Spectral,
}

/// Which module evaluates a kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Degree,
    Revan,
    Spectral,
}

macro_rules! index_kinds {
    ($( $variant:ident => $name:literal, $family:ident, $arity:ident; )*) => {
        /// Every index the ensemble engine can collect.
        ///
        /// Multiplicative kinds are always reported as natural logarithms,
        /// hence the `ln` prefix of their names.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum IndexKind {
            $( #[serde(rename = $name)] $variant, )*
        }

        impl IndexKind {
            pub const ALL: &'static [IndexKind] = &[$(IndexKind::$variant,)*];

            /// Canonical name, also used for output file stems.
            pub fn name(self) -> &'static str {
                match self { $(IndexKind::$variant => $name,)* }
            }

            pub fn family(self) -> Family {
                match self { $(IndexKind::$variant => Family::$family,)* }
            }

            pub fn arity(self) -> Arity {
                match self { $(IndexKind::$variant => Arity::$arity,)* }
            }
        }
    };
}

index_kinds! {
    VCount => "V", Degree, VertexSum;
    M1 => "M1", Degree, EdgeSum;
    M2 => "M2", Degree, EdgeSum;
    SO => "SO", Degree, EdgeSum;
    R => "R", Degree, EdgeSum;
    H => "H", Degree, EdgeSum;
    NK => "lnNK", Degree, VertexProduct;
    Pi1 => "lnPi1", Degree, VertexProduct;
    Pi2 => "lnPi2", Degree, EdgeProduct;
    Pi1Star => "lnPi1star", Degree, EdgeProduct;
    RPi => "lnRPi", Degree, EdgeProduct;
    HPi => "lnHPi", Degree, EdgeProduct;
    R1 => "R1", Revan, EdgeSum;
    R1Vertex => "R1vertex", Revan, VertexSum;
    R2 => "R2", Revan, EdgeSum;
    RSO => "RSO", Revan, EdgeSum;
    RR => "RR", Revan, EdgeSum;
    RH => "RH", Revan, EdgeSum;
    RNK => "lnRNK", Revan, VertexProduct;
    R1Pi => "lnR1Pi", Revan, VertexProduct;
    R1PiStar => "lnR1Pistar", Revan, EdgeProduct;
    R2Pi => "lnR2Pi", Revan, EdgeProduct;
    RRPi => "lnRRPi", Revan, EdgeProduct;
    RHPi => "lnRHPi", Revan, EdgeProduct;
    Energy => "E", Spectral, Spectral;
    LnRVa => "lnRVa", Spectral, Spectral;
    LnRVb => "lnRVb", Spectral, Spectral;
    LnRVbLiteral => "lnRVbLiteral", Spectral, Spectral;
    LnEE => "lnEE", Spectral, Spectral;
}

impl IndexKind {
    pub fn is_log(self) -> bool {
        self.name().starts_with("ln")
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IndexKind {
    type Err = Error;

    /// Case-insensitive; accepts `Pi1*`-style stars and an optional `ln` prefix
    /// on multiplicative kinds.
    fn from_str(s: &str) -> Result<Self> {
        let norm = |x: &str| x.trim().to_ascii_lowercase().replace('*', "star").replace(['_', '-'], "");
        let mut wanted = norm(s);
        if wanted == "vcount" {
            wanted = "v".into();
        }
        IndexKind::ALL
            .iter()
            .copied()
            .find(|k| {
                let canon = norm(k.name());
                canon == wanted || (k.is_log() && canon.strip_prefix("ln") == Some(wanted.as_str()))
            })
            .ok_or_else(|| Error::Parameter(format!("unknown index kind '{s}'")))
    }
}

/// Evaluates a degree-based or Revan kind on a graph.
///
/// Spectral kinds need a weight source and go through [`crate::spectral`].
pub fn evaluate_structural(g: &crate::Graph, kind: IndexKind) -> Result<f64> {
    match kind.family() {
        Family::Degree => degree::evaluate(g, kind),
        Family::Revan => revan::RevanDegrees::new(g)?.evaluate(g, kind),
        Family::Spectral => Err(Error::Parameter(format!("{kind} is a spectral index"))),
    }
}
