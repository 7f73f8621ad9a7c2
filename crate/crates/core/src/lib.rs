//! Finite CAT(0) cube complexes as median graphs, with hyperplane-based
//! criteria for hyperbolicity, contracting subcomplexes and curve-graph analogues.

pub mod bits;
pub mod builders;
pub mod complex;
pub mod corpus;
pub mod curve;
pub mod error;
pub mod graph;
pub mod hyperbolicity;
pub mod hyperplanes;
pub mod isometry;
pub mod median;
pub mod morse;
pub mod report;

pub use bits::Bits;
pub use complex::{CheckMethod, CubeComplex, GraphJson, Hyperplane, MedianReport};
pub use error::{CubexError, Result};
pub use graph::{AuxGraph, AuxKind, DefiningGraph};
pub use isometry::PartialIsometry;
pub use median::{ConvexSubcomplex, FlatRectangle, QuadrupleGrid};

/// Search budget in nodes, overridable through `CUBEX_BUDGET`.
pub fn search_budget(default: u64) -> u64 {
    std::env::var("CUBEX_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}
