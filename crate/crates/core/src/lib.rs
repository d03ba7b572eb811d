//! Dense subgraph search in bipartite graphs.
//!
//! For non-negative integers `α` and `β`, `D(α, β)` is the part of a
//! bipartite graph in which upper nodes keep more than `α` and lower nodes
//! more than `β` edges under a best possible charging of edges to
//! endpoints. This crate computes single subgraphs online with a flow
//! formulation, builds a compact index that answers any `(α, β)` query by
//! one contiguous scan, and keeps that index current under edge insertions
//! and deletions.

pub mod error;
pub mod fixtures;
pub mod flow;
pub mod graph;
pub mod index;
pub mod io;
pub mod maintenance;
mod marks;
pub mod oracle;
pub mod orientation;

pub use error::{FormatError, GraphError, MaintenanceError, OracleError, OrientationError, ParseError};
pub use flow::{compute_dense_subgraph, compute_p, LevelPair};
pub use graph::{BipartiteGraph, EdgeId, NodeRef, Side};
pub use orientation::{Orientation, RankTable};
pub use index::{build_index, rebuild, BdIndex, EgalitarianSet, IndexRow};
pub use maintenance::{DynamicIndex, MaintenanceMode};
