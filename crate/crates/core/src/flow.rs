//! Online computation of a single dense subgraph and of the threshold `p`.
//!
//! Each edge is one unit that must be charged to one of its endpoints; an
//! upper node absorbs up to `α` units and a lower node up to `β`. Charging
//! an edge to an endpoint is the same as directing it into that endpoint,
//! so the assignment is kept as an [`Orientation`]. Augmenting paths run
//! from an under-cap node to an over-cap node along edge directions and are
//! found in layered (blocking-flow) phases. Once no such path remains the
//! over-cap nodes and everything reaching them form `D(α, β)`.

use std::collections::VecDeque;

use crate::graph::{BipartiteGraph, NodeRef, Side};
use crate::marks::Marks;
use crate::orientation::Orientation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelPair {
    pub alpha: u32,
    pub beta: u32,
}

impl LevelPair {
    pub fn new(alpha: u32, beta: u32) -> Self {
        LevelPair { alpha, beta }
    }

    #[inline]
    pub fn cap(self, side: Side) -> u32 {
        match side {
            Side::Upper => self.alpha,
            Side::Lower => self.beta,
        }
    }
}

/// A maximum assignment together with the nodes left below (`under`) and
/// above (`over`) their caps. No directed path joins `under` to `over`.
#[derive(Debug, Clone)]
pub struct OrientationWitness {
    pub levels: LevelPair,
    pub orientation: Orientation,
    pub under: Vec<NodeRef>,
    pub over: Vec<NodeRef>,
}

/// Membership flags for a dense subgraph, indexed by side then node index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseSet {
    members: [Vec<bool>; 2],
}

impl DenseSet {
    pub fn contains(&self, node: NodeRef) -> bool {
        self.members[node.side.slot()]
            .get(node.index as usize)
            .copied()
            .unwrap_or(false)
    }

    pub fn is_empty(&self) -> bool {
        self.members.iter().flatten().all(|&b| !b)
    }

    pub fn len(&self) -> usize {
        self.members.iter().flatten().filter(|&&b| b).count()
    }

    pub fn side(&self, side: Side) -> &[bool] {
        &self.members[side.slot()]
    }

    /// Members in `(side, index)` order.
    pub fn to_vec(&self) -> Vec<NodeRef> {
        let mut out = Vec::new();
        for side in Side::BOTH {
            for (i, &m) in self.members[side.slot()].iter().enumerate() {
                if m {
                    out.push(NodeRef::new(side, i as u32));
                }
            }
        }
        out
    }
}

const UNSEEN: u32 = u32::MAX;

struct Solver<'g> {
    graph: &'g BipartiteGraph,
    levels: LevelPair,
    o: Orientation,
    dist: Marks,
    arc: Marks,
}

impl<'g> Solver<'g> {
    fn new(graph: &'g BipartiteGraph, levels: LevelPair) -> Self {
        // greedy start: charge the upper endpoint while it has room, then the
        // lower one; edges that fit nowhere land on the lower endpoint
        let mut load = [vec![0u32; graph.upper_count()], vec![0u32; graph.lower_count()]];
        let o = Orientation::from_heads(graph, levels.alpha, Side::Upper, |_, u, v| {
            if load[0][u as usize] < levels.alpha {
                load[0][u as usize] += 1;
                Side::Upper
            } else {
                load[1][v as usize] += 1;
                Side::Lower
            }
        });
        Solver {
            graph,
            levels,
            o,
            dist: Marks::new(graph),
            arc: Marks::new(graph),
        }
    }

    #[inline]
    fn excess(&self, x: NodeRef) -> u32 {
        self.o.indegree(x).saturating_sub(self.levels.cap(x.side))
    }

    #[inline]
    fn room(&self, x: NodeRef) -> u32 {
        self.levels.cap(x.side).saturating_sub(self.o.indegree(x))
    }

    fn over_nodes(&self) -> Vec<NodeRef> {
        self.graph.all_nodes().filter(|&x| self.excess(x) > 0).collect()
    }

    /// Layers every node by its distance to the over-cap set, walking edges
    /// backwards; returns the first layer containing an under-cap node.
    fn layer(&mut self, over: &[NodeRef]) -> Option<u32> {
        self.dist.clear();
        let mut queue = VecDeque::with_capacity(over.len());
        for &t in over {
            self.dist.set(t, 0);
            queue.push_back(t);
        }
        let mut found = None;
        while let Some(x) = queue.pop_front() {
            let dx = self.dist.get(x).unwrap();
            if found.is_some_and(|f| dx >= f) {
                break;
            }
            for a in self.graph.neighbors(x) {
                if !self.o.points_into(a.edge, x) {
                    continue;
                }
                let y = NodeRef::new(x.side.other(), a.node);
                if self.dist.get(y).is_some() {
                    continue;
                }
                self.dist.set(y, dx + 1);
                if self.room(y) > 0 {
                    found = Some(found.map_or(dx + 1, |f: u32| f.min(dx + 1)));
                }
                queue.push_back(y);
            }
        }
        found
    }

    /// Pushes as many units as possible from `t` to under-cap nodes on layer
    /// `target`; returns the number of reversed paths.
    fn push_from(&mut self, t: NodeRef, target: u32, stack: &mut Vec<usize>) -> u64 {
        let mut pushed = 0;
        while self.excess(t) > 0 {
            stack.clear();
            let mut cur = t;
            let reached = loop {
                let dc = self.dist.get(cur).unwrap_or(UNSEEN);
                if dc == target && self.room(cur) > 0 {
                    break true;
                }
                if dc < target {
                    let adj = self.graph.neighbors(cur);
                    let mut i = self.arc.get(cur).unwrap_or(0) as usize;
                    let mut next = None;
                    while i < adj.len() {
                        let a = adj[i];
                        if self.o.points_into(a.edge, cur) {
                            let y = NodeRef::new(cur.side.other(), a.node);
                            if self.dist.get(y) == Some(dc + 1) {
                                next = Some((y, a.edge));
                                break;
                            }
                        }
                        i += 1;
                    }
                    self.arc.set(cur, i as u32);
                    if let Some((y, e)) = next {
                        stack.push(e);
                        cur = y;
                        continue;
                    }
                }
                self.dist.set(cur, UNSEEN);
                match stack.pop() {
                    Some(e) => {
                        let (u, v) = self.graph.endpoints(e).unwrap();
                        cur = if cur.side == Side::Upper {
                            NodeRef::lower(v)
                        } else {
                            NodeRef::upper(u)
                        };
                        self.arc.set(cur, self.arc.get(cur).unwrap_or(0) + 1);
                    }
                    None => break false,
                }
            };
            if !reached {
                break;
            }
            for &e in stack.iter() {
                self.o.flip(self.graph, e);
            }
            pushed += 1;
        }
        pushed
    }

    fn run(&mut self) {
        let mut stack = Vec::new();
        loop {
            let over = self.over_nodes();
            if over.is_empty() {
                return;
            }
            let Some(target) = self.layer(&over) else {
                return;
            };
            self.arc.clear();
            let mut pushed = 0;
            for &t in &over {
                pushed += self.push_from(t, target, &mut stack);
            }
            debug_assert!(pushed > 0);
        }
    }

    /// Over-cap nodes plus everything that reaches them.
    fn dense(&self) -> DenseSet {
        let g = self.graph;
        let mut members = [vec![false; g.upper_count()], vec![false; g.lower_count()]];
        let mut queue: VecDeque<NodeRef> = self.over_nodes().into();
        for t in &queue {
            members[t.side.slot()][t.index as usize] = true;
        }
        while let Some(x) = queue.pop_front() {
            for a in g.neighbors(x) {
                if !self.o.points_into(a.edge, x) {
                    continue;
                }
                let m = &mut members[x.side.other().slot()][a.node as usize];
                if !*m {
                    *m = true;
                    queue.push_back(NodeRef::new(x.side.other(), a.node));
                }
            }
        }
        DenseSet { members }
    }
}

/// Membership flags of `D(α, β)`.
pub fn dense_set(graph: &BipartiteGraph, levels: LevelPair) -> DenseSet {
    let mut s = Solver::new(graph, levels);
    s.run();
    s.dense()
}

/// `D(α, β)` as a sorted node list.
pub fn compute_dense_subgraph(graph: &BipartiteGraph, levels: LevelPair) -> Vec<NodeRef> {
    dense_set(graph, levels).to_vec()
}

/// The maximum assignment behind [`compute_dense_subgraph`].
pub fn dense_witness(graph: &BipartiteGraph, levels: LevelPair) -> OrientationWitness {
    let mut s = Solver::new(graph, levels);
    s.run();
    let under = graph.all_nodes().filter(|&x| s.room(x) > 0).collect();
    let over = s.over_nodes();
    OrientationWitness {
        levels,
        orientation: s.o,
        under,
        over,
    }
}

/// Upper bound on `p`: `D(k, k)` nonempty forces more than `4k²` edges.
pub fn p_upper_bound(edge_count: usize) -> i64 {
    if edge_count == 0 {
        return -1;
    }
    ((edge_count as f64).sqrt() / 2.0).floor() as i64
}

/// Largest `k` with `D(k, k)` nonempty, or `-1` for an edgeless graph.
pub fn compute_p(graph: &BipartiteGraph) -> i64 {
    if graph.edge_count() == 0 {
        return -1;
    }
    let (mut lo, mut hi) = (0i64, p_upper_bound(graph.edge_count()));
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        let k = mid as u32;
        if dense_set(graph, LevelPair::new(k, k)).is_empty() {
            hi = mid - 1;
        } else {
            lo = mid;
        }
    }
    lo
}
