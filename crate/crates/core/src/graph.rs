//! Mutable bipartite graph with two independent node namespaces.
//!
//! Every edge is stored once in an edge table and referenced from the
//! adjacency lists of both endpoints. Edge ids are stable for the lifetime
//! of the edge; slots of deleted edges are recycled by later insertions, so
//! per-edge side tables (orientations) must be resized with
//! [`BipartiteGraph::edge_capacity`] and never read for a free slot.

use std::collections::HashMap;
use std::fmt;

use crate::error::GraphError;

/// One of the two node partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// The upper partition `U`.
    Upper,
    /// The lower partition `V`.
    Lower,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Upper, Side::Lower];

    #[inline]
    pub fn other(self) -> Side {
        match self {
            Side::Upper => Side::Lower,
            Side::Lower => Side::Upper,
        }
    }

    #[inline]
    pub(crate) fn slot(self) -> usize {
        match self {
            Side::Upper => 0,
            Side::Lower => 1,
        }
    }
}

/// A node of a [`BipartiteGraph`]: a side plus a dense index within it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef {
    pub side: Side,
    pub index: u32,
}

impl NodeRef {
    #[inline]
    pub const fn upper(index: u32) -> Self {
        NodeRef { side: Side::Upper, index }
    }

    #[inline]
    pub const fn lower(index: u32) -> Self {
        NodeRef { side: Side::Lower, index }
    }

    #[inline]
    pub fn new(side: Side, index: u32) -> Self {
        NodeRef { side, index }
    }
}

impl fmt::Debug for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Upper => write!(f, "u{}", self.index),
            Side::Lower => write!(f, "v{}", self.index),
        }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub type EdgeId = usize;

/// Adjacency entry: the neighbor on the opposite side and the shared edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Adjacent {
    pub node: u32,
    pub edge: EdgeId,
}

#[derive(Debug, Clone, Copy)]
struct EdgeSlot {
    upper: u32,
    lower: u32,
    // positions of this edge inside the two adjacency lists
    upper_pos: u32,
    lower_pos: u32,
}

#[derive(Debug, Clone, Default)]
pub struct BipartiteGraph {
    adjacency: [Vec<Vec<Adjacent>>; 2],
    edges: Vec<Option<EdgeSlot>>,
    free: Vec<EdgeId>,
    lookup: HashMap<(u32, u32), EdgeId>,
    edge_count: usize,
}

impl BipartiteGraph {
    pub fn new(upper_count: usize, lower_count: usize) -> Self {
        BipartiteGraph {
            adjacency: [vec![Vec::new(); upper_count], vec![Vec::new(); lower_count]],
            ..Default::default()
        }
    }

    /// Builds a graph from `(u, v)` index pairs, sizing each side to fit.
    pub fn from_edges<I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut graph = BipartiteGraph::default();
        for (u, v) in edges {
            graph.ensure_node(NodeRef::upper(u));
            graph.ensure_node(NodeRef::lower(v));
            graph.insert_edge(NodeRef::upper(u), NodeRef::lower(v))?;
        }
        Ok(graph)
    }

    #[inline]
    pub fn upper_count(&self) -> usize {
        self.adjacency[0].len()
    }

    #[inline]
    pub fn lower_count(&self) -> usize {
        self.adjacency[1].len()
    }

    #[inline]
    pub fn side_count(&self, side: Side) -> usize {
        self.adjacency[side.slot()].len()
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.upper_count() + self.lower_count()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Upper bound (exclusive) on every live edge id.
    #[inline]
    pub fn edge_capacity(&self) -> usize {
        self.edges.len()
    }

    /// Appends a fresh isolated node to `side`.
    pub fn add_node(&mut self, side: Side) -> NodeRef {
        let list = &mut self.adjacency[side.slot()];
        list.push(Vec::new());
        NodeRef::new(side, (list.len() - 1) as u32)
    }

    /// Grows `node.side` so that `node` is a valid reference.
    pub fn ensure_node(&mut self, node: NodeRef) {
        let list = &mut self.adjacency[node.side.slot()];
        if list.len() <= node.index as usize {
            list.resize_with(node.index as usize + 1, Vec::new);
        }
    }

    #[inline]
    pub fn contains_node(&self, node: NodeRef) -> bool {
        (node.index as usize) < self.side_count(node.side)
    }

    pub fn nodes(&self, side: Side) -> impl Iterator<Item = NodeRef> + '_ {
        (0..self.side_count(side) as u32).map(move |i| NodeRef::new(side, i))
    }

    /// All nodes, upper side first, each side in index order.
    pub fn all_nodes(&self) -> impl Iterator<Item = NodeRef> + '_ {
        self.nodes(Side::Upper).chain(self.nodes(Side::Lower))
    }

    #[inline]
    pub fn neighbors(&self, node: NodeRef) -> &[Adjacent] {
        &self.adjacency[node.side.slot()][node.index as usize]
    }

    #[inline]
    pub fn degree(&self, node: NodeRef) -> usize {
        self.neighbors(node).len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.lookup.contains_key(&(u, v))
    }

    pub fn edge_id(&self, u: u32, v: u32) -> Option<EdgeId> {
        self.lookup.get(&(u, v)).copied()
    }

    /// Endpoints `(u, v)` of a live edge.
    pub fn endpoints(&self, edge: EdgeId) -> Option<(u32, u32)> {
        self.edges.get(edge).copied().flatten().map(|s| (s.upper, s.lower))
    }

    /// Looks up the edge joining two nodes on opposite sides, in either order.
    pub fn edge_between(&self, a: NodeRef, b: NodeRef) -> Option<EdgeId> {
        match (a.side, b.side) {
            (Side::Upper, Side::Lower) => self.edge_id(a.index, b.index),
            (Side::Lower, Side::Upper) => self.edge_id(b.index, a.index),
            _ => None,
        }
    }

    /// Live edges as `(id, u, v)`, in id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, u32, u32)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(id, slot)| slot.map(|s| (id, s.upper, s.lower)))
    }

    fn check_pair(&self, u: NodeRef, v: NodeRef) -> Result<(), GraphError> {
        if u.side != Side::Upper || v.side != Side::Lower {
            return Err(GraphError::WrongSides { u, v });
        }
        for node in [u, v] {
            if !self.contains_node(node) {
                return Err(GraphError::InvalidNode(node));
            }
        }
        Ok(())
    }

    /// Inserts the edge `(u, v)` and returns its id.
    pub fn insert_edge(&mut self, u: NodeRef, v: NodeRef) -> Result<EdgeId, GraphError> {
        self.check_pair(u, v)?;
        if self.lookup.contains_key(&(u.index, v.index)) {
            return Err(GraphError::DuplicateEdge { u, v });
        }
        let upper_list = &mut self.adjacency[0][u.index as usize];
        let upper_pos = upper_list.len() as u32;
        let lower_pos = self.adjacency[1][v.index as usize].len() as u32;
        let slot = EdgeSlot {
            upper: u.index,
            lower: v.index,
            upper_pos,
            lower_pos,
        };
        let id = match self.free.pop() {
            Some(id) => {
                self.edges[id] = Some(slot);
                id
            }
            None => {
                self.edges.push(Some(slot));
                self.edges.len() - 1
            }
        };
        self.adjacency[0][u.index as usize].push(Adjacent { node: v.index, edge: id });
        self.adjacency[1][v.index as usize].push(Adjacent { node: u.index, edge: id });
        self.lookup.insert((u.index, v.index), id);
        self.edge_count += 1;
        Ok(id)
    }

    /// Removes the edge `(u, v)`, returning the id it occupied.
    pub fn delete_edge(&mut self, u: NodeRef, v: NodeRef) -> Result<EdgeId, GraphError> {
        self.check_pair(u, v)?;
        let id = self
            .lookup
            .remove(&(u.index, v.index))
            .ok_or(GraphError::MissingEdge { u, v })?;
        let slot = self.edges[id].take().expect("lookup points at a live edge");

        let list = &mut self.adjacency[0][u.index as usize];
        list.swap_remove(slot.upper_pos as usize);
        if let Some(moved) = list.get(slot.upper_pos as usize) {
            self.edges[moved.edge].as_mut().unwrap().upper_pos = slot.upper_pos;
        }
        let list = &mut self.adjacency[1][v.index as usize];
        list.swap_remove(slot.lower_pos as usize);
        if let Some(moved) = list.get(slot.lower_pos as usize) {
            self.edges[moved.edge].as_mut().unwrap().lower_pos = slot.lower_pos;
        }

        self.free.push(id);
        self.edge_count -= 1;
        Ok(id)
    }

    /// Subgraph induced by `keep` (a per-node mask for each side). Node
    /// indices are preserved; nodes outside the mask become isolated.
    pub fn induced(&self, keep_upper: &[bool], keep_lower: &[bool]) -> BipartiteGraph {
        let mut sub = BipartiteGraph::new(self.upper_count(), self.lower_count());
        for (_, u, v) in self.edges() {
            if keep_upper[u as usize] && keep_lower[v as usize] {
                sub.insert_edge(NodeRef::upper(u), NodeRef::lower(v))
                    .expect("edges of a simple graph are unique");
            }
        }
        sub
    }

    /// Set of `(u, v)` pairs; handy for structural comparisons.
    pub fn edge_pairs(&self) -> Vec<(u32, u32)> {
        let mut pairs: Vec<_> = self.edges().map(|(_, u, v)| (u, v)).collect();
        pairs.sort_unstable();
        pairs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degree_sum(g: &BipartiteGraph, side: Side) -> usize {
        g.nodes(side).map(|n| g.degree(n)).sum()
    }

    #[test]
    fn insert_into_single_pair() {
        let mut g = BipartiteGraph::new(1, 1);
        g.insert_edge(NodeRef::upper(0), NodeRef::lower(0)).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 0));
    }

    #[test]
    fn insert_then_delete_restores_graph() {
        let mut g = BipartiteGraph::from_edges([(0, 0), (0, 1), (1, 1)]).unwrap();
        let before = g.edge_pairs();
        g.insert_edge(NodeRef::upper(1), NodeRef::lower(0)).unwrap();
        g.delete_edge(NodeRef::upper(1), NodeRef::lower(0)).unwrap();
        assert_eq!(g.edge_pairs(), before);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn error_paths() {
        let mut g = BipartiteGraph::new(2, 2);
        let (u, v) = (NodeRef::upper(0), NodeRef::lower(1));
        g.insert_edge(u, v).unwrap();
        assert_eq!(g.insert_edge(u, v), Err(GraphError::DuplicateEdge { u, v }));
        assert_eq!(
            g.insert_edge(NodeRef::upper(5), v),
            Err(GraphError::InvalidNode(NodeRef::upper(5)))
        );
        assert!(matches!(g.insert_edge(v, u), Err(GraphError::WrongSides { .. })));
        assert_eq!(
            g.delete_edge(NodeRef::upper(1), v),
            Err(GraphError::MissingEdge { u: NodeRef::upper(1), v })
        );
    }

    #[test]
    fn swap_remove_keeps_positions_consistent() {
        let mut g = BipartiteGraph::from_edges([(0, 0), (0, 1), (0, 2), (1, 2)]).unwrap();
        g.delete_edge(NodeRef::upper(0), NodeRef::lower(0)).unwrap();
        g.delete_edge(NodeRef::upper(0), NodeRef::lower(2)).unwrap();
        let id = g.insert_edge(NodeRef::upper(1), NodeRef::lower(0)).unwrap();
        assert_eq!(g.endpoints(id), Some((1, 0)));
        assert_eq!(g.edge_pairs(), vec![(0, 1), (1, 0), (1, 2)]);
        for node in g.all_nodes() {
            for adj in g.neighbors(node) {
                let (u, v) = g.endpoints(adj.edge).unwrap();
                let other = if node.side == Side::Upper { v } else { u };
                assert_eq!(other, adj.node);
            }
        }
    }

    #[test]
    fn degree_sums_after_random_updates() {
        // xorshift keeps this test free of extra dev-deps at the unit level
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = |m: u64| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % m) as u32
        };
        let mut g = BipartiteGraph::new(8, 9);
        for _ in 0..400 {
            let (u, v) = (NodeRef::upper(next(8)), NodeRef::lower(next(9)));
            if g.has_edge(u.index, v.index) && next(3) == 0 {
                g.delete_edge(u, v).unwrap();
            } else if !g.has_edge(u.index, v.index) {
                g.insert_edge(u, v).unwrap();
            }
            assert_eq!(degree_sum(&g, Side::Upper), g.edge_count());
            assert_eq!(degree_sum(&g, Side::Lower), g.edge_count());
        }
        // lookup agrees with adjacency for every pair
        for u in 0..8 {
            for v in 0..9 {
                let in_adj = g.neighbors(NodeRef::upper(u)).iter().any(|a| a.node == v);
                assert_eq!(in_adj, g.has_edge(u, v));
            }
        }
    }
}
