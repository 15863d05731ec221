//! The `O(n²)` deciders and the policy pipeline around them.
//!
//! * Type I: shift every row by its excess over the global minimum, then test
//!   the anti-ultrametric inequality `â_ij ≥ min(â_ik, â_jk)` by building the
//!   laminar plateau family and reconstructing the matrix from it.
//! * Types II and III: adjacent `2×2` equalities on the cross blocks of the
//!   infinity-graph components, which chain into the full equalities.
//!
//! Explain mode adds an `O(n⁴)` scan that returns a violated quadruple.

mod algorithms;
mod laminar;
mod normalize;
mod pipeline;
mod scan;

use thiserror::Error;

pub use algorithms::{test_type1, test_type2, test_type3};
pub use laminar::{
    check_anti_ultrametric, decompose, for_each_assignment, reconstruct, LaminarFamily, LaminarNode,
};
pub use normalize::{normalize_type1, NormalizedMatrix};
pub use pipeline::{test_mconvexity, Policy};
pub use scan::{condition_holds, find_violation_quadruple};

/// A precondition the pipeline guarantees was violated by a direct caller.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TesterError {
    #[error("row {0} has no finite coefficient")]
    InfiniteRow(usize),
    #[error("infinite coefficient a_{i},{j} across components (Condition B violated)")]
    InfiniteCrossPair { i: usize, j: usize },
}
