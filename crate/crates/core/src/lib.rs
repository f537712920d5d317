//! Approximate and exact minimum-weight edge covers of k-cycles and
//! k-cliques.
//!
//! The approximation side solves the covering LP relaxation exactly over the
//! rationals and rounds it ([`cover`]). The exact side ([`exact`]) runs
//! branch-and-bound searches that certify the rounding guarantees on small
//! instances.

pub mod cover;
pub mod exact;
pub mod graph;
pub mod lp;
pub mod parallel;
pub mod random;
pub mod structures;
pub mod study;

pub use cover::{Algorithm, CoverConfig, CoverError, CoverResult};
pub use exact::{ExactConfig, ExactError};
pub use graph::{parse_graph, Edge, EdgeSet, WeightedGraph};
pub use lp::{FractionalSolution, Rational};
pub use parallel::Execution;
pub use structures::{EnumConfig, StructureKind};
