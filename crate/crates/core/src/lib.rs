//! Testing M-convexity of quadratic set functions on a cardinality slice.
//!
//! An instance is `f(x) = Σ a_i x_i + Σ_{i<j} a_ij x_i x_j` restricted to
//! `|x| = r`, with `a_ij ∈ ℝ ∪ {+∞}`. [`fast_tester::test_mconvexity`]
//! decides M-convexity in `O(n²)` whenever every component of the
//! infinity graph is a clique, and [`oracle::Oracle`] decides it by brute
//! force on small instances.

pub mod cli;
pub mod fast_tester;
pub mod fixtures;
pub mod generators;
pub mod instance;
pub mod oracle;
pub mod structure;
pub mod value;
pub mod verdict;

pub use fast_tester::{test_mconvexity, Policy};
pub use instance::{parse_instance, serialize_instance, PairMatrix, QuadraticInstance};
pub use oracle::Oracle;
pub use structure::{Structure, TypeClass};
pub use value::{ExtValue, Tolerance};
pub use verdict::{Method, Status, Verdict, Witness};
