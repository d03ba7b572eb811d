//! A small hand-built sample graph used throughout the tests and docs.
//!
//! Nodes are named with 1-based labels (`u(1)` is upper index 0). The graph
//! has 17 edges:
//!
//! ```text
//! u1: v1 v2 v3 v6    u4: v2 v3 v4 v5
//! u2: v1 v2 v3       u5: v4
//! u3: v1 v2 v3 v4    u6: v5
//! ```

use crate::graph::{BipartiteGraph, NodeRef, Side};
use crate::orientation::Orientation;

pub const SAMPLE_EDGES: [(u32, u32); 17] = [
    (1, 1),
    (1, 2),
    (1, 3),
    (1, 6),
    (2, 1),
    (2, 2),
    (2, 3),
    (3, 1),
    (3, 2),
    (3, 3),
    (3, 4),
    (4, 2),
    (4, 3),
    (4, 4),
    (4, 5),
    (5, 4),
    (6, 5),
];

/// Upper node with 1-based label `label`.
pub const fn u(label: u32) -> NodeRef {
    NodeRef::upper(label - 1)
}

/// Lower node with 1-based label `label`.
pub const fn v(label: u32) -> NodeRef {
    NodeRef::lower(label - 1)
}

pub fn sample_graph() -> BipartiteGraph {
    BipartiteGraph::from_edges(SAMPLE_EDGES.iter().map(|&(a, b)| (a - 1, b - 1)))
        .expect("fixture edges are distinct")
}

pub fn sample_edge_list() -> String {
    let mut s = String::new();
    for (a, b) in SAMPLE_EDGES {
        s.push_str(&format!("{a} {b}\n"));
    }
    s
}

/// Egalitarian upper-capped orientation of the sample graph at level 1.
/// Six edges point into upper nodes; the rest point into lower nodes.
pub fn sample_orientation(graph: &BipartiteGraph) -> Orientation {
    const INTO_UPPER: [(u32, u32); 6] = [(1, 2), (2, 2), (3, 3), (4, 3), (5, 4), (6, 5)];
    Orientation::from_heads(graph, 1, Side::Upper, |_, a, b| {
        if INTO_UPPER.contains(&(a + 1, b + 1)) {
            Side::Upper
        } else {
            Side::Lower
        }
    })
}

/// Upper-capped ranks of the sample graph at level 1.
pub fn level_one_ranks() -> Vec<(NodeRef, i32)> {
    vec![
        (u(1), 2),
        (u(2), 2),
        (u(3), 2),
        (u(4), 2),
        (u(5), -1),
        (u(6), -1),
        (v(1), 2),
        (v(2), 2),
        (v(3), 2),
        (v(4), 1),
        (v(5), 0),
        (v(6), 0),
    ]
}

/// Upper-capped ranks of the sample graph at level 0.
pub fn level_zero_ranks() -> Vec<(NodeRef, i32)> {
    vec![
        (u(1), 3),
        (u(2), 3),
        (u(3), 3),
        (u(4), 3),
        (u(5), 2),
        (u(6), 1),
        (v(1), 2),
        (v(2), 3),
        (v(3), 3),
        (v(4), 2),
        (v(5), 1),
        (v(6), 0),
    ]
}
