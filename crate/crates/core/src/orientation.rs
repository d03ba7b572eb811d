//! Egalitarian orientations and the searches built on them.
//!
//! An orientation at level `k` with capped side `C` gives every `C` node of
//! degree `d` exactly `min(d, k)` inbound edges. It is *egalitarian* when,
//! additionally, no directed path joins two nodes of the uncapped side whose
//! indegrees differ by two or more (the head being the larger). From such an
//! orientation the per-node ranks for level `k` follow in linear time.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use crate::error::OrientationError;
use crate::graph::{BipartiteGraph, EdgeId, NodeRef, Side};
use crate::marks::Marks;

/// Direction flags for every edge plus cached indegrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    level: u32,
    capped: Side,
    toward_upper: Vec<bool>,
    indegree: [Vec<u32>; 2],
}

impl Orientation {
    /// An orientation with every edge pointing into `head(edge)`.
    pub fn from_heads<F>(graph: &BipartiteGraph, level: u32, capped: Side, mut head: F) -> Self
    where
        F: FnMut(EdgeId, u32, u32) -> Side,
    {
        let mut o = Orientation {
            level,
            capped,
            toward_upper: vec![false; graph.edge_capacity()],
            indegree: [vec![0; graph.upper_count()], vec![0; graph.lower_count()]],
        };
        for (e, u, v) in graph.edges() {
            match head(e, u, v) {
                Side::Upper => {
                    o.toward_upper[e] = true;
                    o.indegree[0][u as usize] += 1;
                }
                Side::Lower => o.indegree[1][v as usize] += 1,
            }
        }
        o
    }

    #[inline]
    pub fn level(&self) -> u32 {
        self.level
    }

    #[inline]
    pub fn capped_side(&self) -> Side {
        self.capped
    }

    #[inline]
    pub fn uncapped_side(&self) -> Side {
        self.capped.other()
    }

    #[inline]
    pub fn indegree(&self, node: NodeRef) -> u32 {
        self.indegree[node.side.slot()][node.index as usize]
    }

    pub fn indegrees(&self, side: Side) -> &[u32] {
        &self.indegree[side.slot()]
    }

    /// Side of the endpoint `edge` currently points into.
    #[inline]
    pub fn head_side(&self, edge: EdgeId) -> Side {
        if self.toward_upper[edge] {
            Side::Upper
        } else {
            Side::Lower
        }
    }

    #[inline]
    pub fn points_into(&self, edge: EdgeId, node: NodeRef) -> bool {
        self.toward_upper[edge] == (node.side == Side::Upper)
    }

    /// Grows the per-node and per-edge tables to match `graph`.
    pub fn sync(&mut self, graph: &BipartiteGraph) {
        if self.toward_upper.len() < graph.edge_capacity() {
            self.toward_upper.resize(graph.edge_capacity(), false);
        }
        for side in Side::BOTH {
            let n = graph.side_count(side);
            if self.indegree[side.slot()].len() < n {
                self.indegree[side.slot()].resize(n, 0);
            }
        }
    }

    /// Registers a freshly inserted graph edge, directed into `head`.
    pub fn attach_edge(&mut self, graph: &BipartiteGraph, edge: EdgeId, head: NodeRef) {
        self.sync(graph);
        self.toward_upper[edge] = head.side == Side::Upper;
        self.indegree[head.side.slot()][head.index as usize] += 1;
    }

    /// Forgets an edge that is about to be removed from the graph.
    pub fn detach_edge(&mut self, graph: &BipartiteGraph, edge: EdgeId) {
        let head = self.head(graph, edge);
        self.indegree[head.side.slot()][head.index as usize] -= 1;
    }

    pub fn head(&self, graph: &BipartiteGraph, edge: EdgeId) -> NodeRef {
        let (u, v) = graph.endpoints(edge).expect("live edge");
        if self.toward_upper[edge] {
            NodeRef::upper(u)
        } else {
            NodeRef::lower(v)
        }
    }

    /// Reverses a single edge, moving one unit of indegree to its old tail.
    pub fn flip(&mut self, graph: &BipartiteGraph, edge: EdgeId) {
        let (u, v) = graph.endpoints(edge).expect("live edge");
        if self.toward_upper[edge] {
            self.indegree[0][u as usize] -= 1;
            self.indegree[1][v as usize] += 1;
        } else {
            self.indegree[1][v as usize] -= 1;
            self.indegree[0][u as usize] += 1;
        }
        self.toward_upper[edge] = !self.toward_upper[edge];
    }

    /// Required indegree of a capped-side node.
    #[inline]
    fn cap_for(&self, graph: &BipartiteGraph, node: NodeRef) -> u32 {
        (graph.degree(node) as u32).min(self.level)
    }

    /// `Σ indegree²` over the uncapped side; strictly decreases under balancing.
    pub fn potential(&self) -> u64 {
        self.indegree[self.uncapped_side().slot()]
            .iter()
            .map(|&d| (d as u64) * (d as u64))
            .sum()
    }
}

/// Per-node rank values for one fixed level and capped side.
///
/// For an upper-capped table at level `α`, `rank(x)` is the largest `β` with
/// `x ∈ D(α, β)`, or `-1`; a lower-capped table at level `β` stores the
/// largest such `α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    level: u32,
    capped: Side,
    ranks: [Vec<i32>; 2],
}

impl RankTable {
    pub fn new(level: u32, capped: Side, upper: Vec<i32>, lower: Vec<i32>) -> Self {
        RankTable {
            level,
            capped,
            ranks: [upper, lower],
        }
    }

    pub fn unranked(level: u32, capped: Side, upper_count: usize, lower_count: usize) -> Self {
        Self::new(level, capped, vec![-1; upper_count], vec![-1; lower_count])
    }

    #[inline]
    pub fn level(&self) -> u32 {
        self.level
    }

    #[inline]
    pub fn capped_side(&self) -> Side {
        self.capped
    }

    #[inline]
    pub fn rank(&self, node: NodeRef) -> i32 {
        self.ranks[node.side.slot()]
            .get(node.index as usize)
            .copied()
            .unwrap_or(-1)
    }

    #[inline]
    pub fn set(&mut self, node: NodeRef, rank: i32) {
        self.ranks[node.side.slot()][node.index as usize] = rank;
    }

    pub fn side(&self, side: Side) -> &[i32] {
        &self.ranks[side.slot()]
    }

    pub fn side_mut(&mut self, side: Side) -> &mut Vec<i32> {
        &mut self.ranks[side.slot()]
    }

    pub fn max_rank(&self) -> i32 {
        self.ranks.iter().flatten().copied().max().unwrap_or(-1)
    }

    /// Pads both sides with `-1` up to the graph's node counts.
    pub fn sync(&mut self, graph: &BipartiteGraph) {
        for side in Side::BOTH {
            let n = graph.side_count(side);
            if self.ranks[side.slot()].len() < n {
                self.ranks[side.slot()].resize(n, -1);
            }
        }
    }

    /// Nodes whose rank is at least `threshold`.
    pub fn at_least(&self, threshold: i32) -> Vec<NodeRef> {
        let mut out = Vec::new();
        for side in Side::BOTH {
            for (i, &r) in self.ranks[side.slot()].iter().enumerate() {
                if r >= threshold {
                    out.push(NodeRef::new(side, i as u32));
                }
            }
        }
        out
    }
}

/// Initial orientation honoring the cap on `capped`: each capped node keeps
/// its `level` lowest-index neighbors inbound and sends every other edge out.
pub fn init_orientation(graph: &BipartiteGraph, level: u32, capped: Side) -> Orientation {
    let mut heads = vec![capped.other(); graph.edge_capacity()];
    let mut scratch = Vec::new();
    for node in graph.nodes(capped) {
        let adj = graph.neighbors(node);
        if adj.len() as u32 <= level {
            for a in adj {
                heads[a.edge] = capped;
            }
        } else {
            scratch.clear();
            scratch.extend(adj.iter().map(|a| (a.node, a.edge)));
            scratch.select_nth_unstable(level as usize);
            for &(_, e) in &scratch[..level as usize] {
                heads[e] = capped;
            }
        }
    }
    Orientation::from_heads(graph, level, capped, |e, _, _| heads[e])
}

/// Checks the capped-side condition against recounted indegrees.
fn check_caps(graph: &BipartiteGraph, o: &Orientation) -> Result<(), OrientationError> {
    let mut recount = [vec![0u32; graph.upper_count()], vec![0u32; graph.lower_count()]];
    for (e, u, v) in graph.edges() {
        match o.head_side(e) {
            Side::Upper => recount[0][u as usize] += 1,
            Side::Lower => recount[1][v as usize] += 1,
        }
    }
    for node in graph.all_nodes() {
        let actual = recount[node.side.slot()][node.index as usize];
        let expected = if node.side == o.capped {
            o.cap_for(graph, node)
        } else {
            o.indegree(node)
        };
        if actual != o.indegree(node) || actual != expected {
            return Err(OrientationError::CapViolated {
                node,
                indegree: actual,
                expected,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BalanceStats {
    pub reversals: u64,
    pub phases: u64,
    pub potential_before: u64,
    pub potential_after: u64,
}

const UNSEEN: u32 = u32::MAX;

/// Rebalances `o` in place until it is egalitarian.
///
/// Indegree classes are processed from the highest down. For class `k`
/// every path from an uncapped node of indegree `≤ k-2` to one of indegree
/// `k` is reversed, in blocking-flow phases over the layered reverse
/// search from the class-`k` nodes. Reversals at class `k` never create a
/// path into a higher class, so one sweep suffices. Nodes that reach a
/// finished class cannot lie on any later path and are skipped from then on.
pub fn balance_orientation(
    graph: &BipartiteGraph,
    o: &mut Orientation,
) -> Result<BalanceStats, OrientationError> {
    check_caps(graph, o)?;
    let free = o.uncapped_side();
    let mut stats = BalanceStats {
        potential_before: o.potential(),
        ..Default::default()
    };

    let max = o.indegrees(free).iter().copied().max().unwrap_or(0) as usize;
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); max + 1];
    for (i, &d) in o.indegrees(free).iter().enumerate() {
        buckets[d as usize].push(i as u32);
    }

    let mut dist = Marks::new(graph);
    let mut arc = Marks::new(graph);
    let mut seen = Marks::new(graph);
    let mut closed = [vec![false; graph.upper_count()], vec![false; graph.lower_count()]];
    let mut explored = Vec::new();
    let mut queue = VecDeque::new();
    let mut sinks = Vec::new();
    let mut stack: Vec<(NodeRef, EdgeId)> = Vec::new();

    for k in (2..=max as u32).rev() {
        loop {
            // current members of class k (buckets may hold stale entries)
            seen.clear();
            sinks.clear();
            for &i in &buckets[k as usize] {
                let node = NodeRef::new(free, i);
                if o.indegree(node) == k && seen.get(node).is_none() && !closed[free.slot()][i as usize] {
                    seen.set(node, 0);
                    sinks.push(node);
                }
            }
            buckets[k as usize].clone_from(&sinks.iter().map(|n| n.index).collect());
            if sinks.is_empty() {
                break;
            }

            // layered reverse search; stop after the first layer holding a source
            dist.clear();
            queue.clear();
            explored.clear();
            for &t in &sinks {
                dist.set(t, 0);
                queue.push_back(t);
                explored.push(t);
            }
            let mut source_layer = UNSEEN;
            while let Some(x) = queue.pop_front() {
                let dx = dist.get(x).unwrap();
                if dx >= source_layer {
                    break;
                }
                for a in graph.neighbors(x) {
                    if !o.points_into(a.edge, x) {
                        continue;
                    }
                    let y = NodeRef::new(x.side.other(), a.node);
                    if dist.get(y).is_some() || closed[y.side.slot()][y.index as usize] {
                        continue;
                    }
                    dist.set(y, dx + 1);
                    explored.push(y);
                    if y.side == free && o.indegree(y) + 2 <= k {
                        source_layer = source_layer.min(dx + 1);
                    }
                    queue.push_back(y);
                }
            }
            if source_layer == UNSEEN {
                for x in &explored {
                    closed[x.side.slot()][x.index as usize] = true;
                }
                break;
            }
            stats.phases += 1;

            // blocking flow: one unit per sink, sources absorb until k-1
            arc.clear();
            for &t in &sinks {
                stack.clear();
                let mut cur = t;
                loop {
                    let dc = dist.get(cur).unwrap_or(UNSEEN);
                    if dc == source_layer {
                        if cur.side == free && o.indegree(cur) + 2 <= k {
                            for &(_, e) in &stack {
                                o.flip(graph, e);
                            }
                            buckets[o.indegree(cur) as usize].push(cur.index);
                            buckets[(k - 1) as usize].push(t.index);
                            stats.reversals += 1;
                            break;
                        }
                    } else if dc != UNSEEN {
                        let adj = graph.neighbors(cur);
                        let mut i = arc.get(cur).unwrap_or(0) as usize;
                        let mut next = None;
                        while i < adj.len() {
                            let a = adj[i];
                            if o.points_into(a.edge, cur) {
                                let y = NodeRef::new(cur.side.other(), a.node);
                                if dist.get(y) == Some(dc + 1) {
                                    next = Some((y, a.edge));
                                    break;
                                }
                            }
                            i += 1;
                        }
                        arc.set(cur, i as u32);
                        if let Some((y, e)) = next {
                            stack.push((cur, e));
                            cur = y;
                            continue;
                        }
                    }
                    // dead end: prune and retreat
                    dist.set(cur, UNSEEN);
                    match stack.pop() {
                        Some((parent, _)) => {
                            arc.set(parent, arc.get(parent).unwrap_or(0) + 1);
                            cur = parent;
                        }
                        None => break,
                    }
                }
            }
        }
    }
    stats.potential_after = o.potential();
    Ok(stats)
}

/// Ranks for every node from an egalitarian orientation, in `O(|E|)`.
///
/// Classes are peeled from the highest indegree down; a node receives rank
/// `k` when it lies in, or reaches, the set of still-unvisited uncapped
/// nodes of indegree `k + 1`. A single visited set is shared across rounds.
pub fn orientation_to_rank(graph: &BipartiteGraph, o: &Orientation) -> RankTable {
    let free = o.uncapped_side();
    let mut table = RankTable::unranked(o.level, o.capped, graph.upper_count(), graph.lower_count());
    let max = o.indegrees(free).iter().copied().max().unwrap_or(0) as usize;
    if max == 0 {
        return table;
    }
    let mut by_indegree: Vec<Vec<u32>> = vec![Vec::new(); max + 1];
    for (i, &d) in o.indegrees(free).iter().enumerate() {
        by_indegree[d as usize].push(i as u32);
    }
    let mut visited = [vec![false; graph.upper_count()], vec![false; graph.lower_count()]];
    let mut queue = VecDeque::new();
    for k in (0..max).rev() {
        for &i in &by_indegree[k + 1] {
            let seen = &mut visited[free.slot()][i as usize];
            if !*seen {
                *seen = true;
                queue.push_back(NodeRef::new(free, i));
            }
        }
        while let Some(x) = queue.pop_front() {
            table.set(x, k as i32);
            for a in graph.neighbors(x) {
                if !o.points_into(a.edge, x) {
                    continue;
                }
                let y = NodeRef::new(x.side.other(), a.node);
                let seen = &mut visited[y.side.slot()][y.index as usize];
                if !*seen {
                    *seen = true;
                    queue.push_back(y);
                }
            }
        }
    }
    table
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EgalitarianViolation {
    /// Cached indegrees or the capped-side condition are wrong.
    Cap(OrientationError),
    /// `from` reaches `to` although `to` has at least two more inbound edges.
    Path {
        from: NodeRef,
        to: NodeRef,
        from_indegree: u32,
        to_indegree: u32,
    },
}

/// Checks both egalitarian conditions; `Ok(())` when the orientation passes.
///
/// The path condition is evaluated through the largest indegree reachable
/// from each uncapped node, computed with one reverse sweep per indegree
/// class sharing a visited set.
pub fn verify_egalitarian(graph: &BipartiteGraph, o: &Orientation) -> Result<(), EgalitarianViolation> {
    check_caps(graph, o).map_err(EgalitarianViolation::Cap)?;
    let free = o.uncapped_side();
    let max = o.indegrees(free).iter().copied().max().unwrap_or(0) as usize;
    let mut by_indegree: Vec<Vec<u32>> = vec![Vec::new(); max + 1];
    for (i, &d) in o.indegrees(free).iter().enumerate() {
        by_indegree[d as usize].push(i as u32);
    }
    // origin[x] = the class node that first reached x
    let mut origin: [Vec<Option<NodeRef>>; 2] =
        [vec![None; graph.upper_count()], vec![None; graph.lower_count()]];
    let mut queue = VecDeque::new();
    for k in (0..=max).rev() {
        for &i in &by_indegree[k] {
            let t = NodeRef::new(free, i);
            if origin[free.slot()][i as usize].is_none() {
                origin[free.slot()][i as usize] = Some(t);
                queue.push_back(t);
            }
        }
        while let Some(x) = queue.pop_front() {
            let root = origin[x.side.slot()][x.index as usize];
            for a in graph.neighbors(x) {
                if !o.points_into(a.edge, x) {
                    continue;
                }
                let slot = &mut origin[x.side.other().slot()][a.node as usize];
                if slot.is_none() {
                    *slot = root;
                    queue.push_back(NodeRef::new(x.side.other(), a.node));
                }
            }
        }
    }
    for s in graph.nodes(free) {
        let t = origin[free.slot()][s.index as usize].expect("every uncapped node is visited");
        let (ds, dt) = (o.indegree(s), o.indegree(t));
        if dt >= ds + 2 {
            return Err(EgalitarianViolation::Path {
                from: s,
                to: t,
                from_indegree: ds,
                to_indegree: dt,
            });
        }
    }
    Ok(())
}

/// A node found by a directed search together with the path joining it to
/// the search origin. `nodes` and `edges` run in edge direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reach {
    pub node: NodeRef,
    pub nodes: Vec<NodeRef>,
    pub edges: Vec<EdgeId>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Backward,
}

type Parents = HashMap<NodeRef, Option<(NodeRef, EdgeId)>>;

/// Breadth-first search from `start`, returning visited nodes in visit
/// order and the edge each was discovered through (`None` for `start`).
fn directed_bfs(graph: &BipartiteGraph, o: &Orientation, start: NodeRef, dir: Direction) -> (Vec<NodeRef>, Parents) {
    let mut parent = Parents::new();
    parent.insert(start, None);
    let mut order = vec![start];
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for a in graph.neighbors(x) {
            let into_x = o.points_into(a.edge, x);
            if into_x != (dir == Direction::Backward) {
                continue;
            }
            let y = NodeRef::new(x.side.other(), a.node);
            if let Entry::Vacant(slot) = parent.entry(y) {
                slot.insert(Some((x, a.edge)));
                order.push(y);
            }
        }
    }
    (order, parent)
}

fn trace(parent: &Parents, from: NodeRef, dir: Direction) -> (Vec<NodeRef>, Vec<EdgeId>) {
    let mut nodes = vec![from];
    let mut edges = Vec::new();
    let mut cur = from;
    while let Some(&Some((p, e))) = parent.get(&cur) {
        nodes.push(p);
        edges.push(e);
        cur = p;
    }
    if dir == Direction::Forward {
        nodes.reverse();
        edges.reverse();
    }
    (nodes, edges)
}

/// Uncapped node of minimum indegree that can reach `target` (lowest index
/// on ties), with one shortest path from it to `target`.
pub fn min_reacher(graph: &BipartiteGraph, o: &Orientation, target: NodeRef) -> Option<Reach> {
    let free = o.uncapped_side();
    let (order, parent) = directed_bfs(graph, o, target, Direction::Backward);
    let best = order
        .iter()
        .skip(1)
        .filter(|n| n.side == free)
        .min_by_key(|n| (o.indegree(**n), n.index))?;
    let (nodes, edges) = trace(&parent, *best, Direction::Backward);
    Some(Reach {
        node: *best,
        nodes,
        edges,
    })
}

/// Uncapped node of maximum indegree reachable from `start` (lowest index on
/// ties); `start` itself competes when `include_self` is set.
pub fn max_reachable(
    graph: &BipartiteGraph,
    o: &Orientation,
    start: NodeRef,
    include_self: bool,
) -> Option<Reach> {
    let free = o.uncapped_side();
    let (order, parent) = directed_bfs(graph, o, start, Direction::Forward);
    let skip = usize::from(!include_self);
    let best = order
        .iter()
        .skip(skip)
        .filter(|n| n.side == free)
        .min_by_key(|n| (std::cmp::Reverse(o.indegree(**n)), n.index))?;
    let (nodes, edges) = trace(&parent, *best, Direction::Forward);
    Some(Reach {
        node: *best,
        nodes,
        edges,
    })
}

/// Every node that can reach `target` (including `target`).
pub fn reachers(graph: &BipartiteGraph, o: &Orientation, target: NodeRef) -> Vec<NodeRef> {
    directed_bfs(graph, o, target, Direction::Backward).0
}

/// Every node reachable from `start` (including `start`).
pub fn reachable(graph: &BipartiteGraph, o: &Orientation, start: NodeRef) -> Vec<NodeRef> {
    directed_bfs(graph, o, start, Direction::Forward).0
}

/// Reverses the directed path visiting `nodes` in order.
pub fn reverse_path(
    graph: &BipartiteGraph,
    o: &mut Orientation,
    nodes: &[NodeRef],
) -> Result<(), OrientationError> {
    if nodes.len() < 2 {
        return Err(OrientationError::InvalidPath("a path needs at least one edge".into()));
    }
    let mut edges = Vec::with_capacity(nodes.len() - 1);
    for pair in nodes.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if !graph.contains_node(a) || !graph.contains_node(b) {
            return Err(OrientationError::InvalidPath(format!("unknown node in {a} -> {b}")));
        }
        let e = graph
            .edge_between(a, b)
            .ok_or_else(|| OrientationError::InvalidPath(format!("no edge {a} - {b}")))?;
        if !o.points_into(e, b) {
            return Err(OrientationError::InvalidPath(format!("edge {a} - {b} points into {a}")));
        }
        if edges.contains(&e) {
            return Err(OrientationError::InvalidPath(format!("edge {a} - {b} repeated")));
        }
        edges.push(e);
    }
    for e in edges {
        o.flip(graph, e);
    }
    Ok(())
}

/// A capped orientation that already spreads the uncapped load: capped
/// nodes are visited by decreasing degree and each sends its surplus edges
/// to the currently least loaded neighbors.
pub fn warm_orientation(graph: &BipartiteGraph, level: u32, capped: Side) -> Orientation {
    let free = capped.other();
    let mut heads = vec![capped; graph.edge_capacity()];
    let mut load = vec![0u32; graph.side_count(free)];
    let mut order: Vec<NodeRef> = graph
        .nodes(capped)
        .filter(|&x| graph.degree(x) > level as usize)
        .collect();
    order.sort_unstable_by_key(|&x| std::cmp::Reverse(graph.degree(x)));
    let mut scratch = Vec::new();
    for node in order {
        let adj = graph.neighbors(node);
        let surplus = adj.len() - level as usize;
        scratch.clear();
        scratch.extend(adj.iter().map(|a| (load[a.node as usize], a.node, a.edge)));
        if surplus < scratch.len() {
            scratch.select_nth_unstable(surplus);
        }
        for &(_, w, e) in &scratch[..surplus] {
            heads[e] = free;
            load[w as usize] += 1;
        }
    }
    Orientation::from_heads(graph, level, capped, |e, _, _| heads[e])
}

/// Builds a balanced (egalitarian) orientation for `level` and `capped`.
pub fn egalitarian_orientation(graph: &BipartiteGraph, level: u32, capped: Side) -> Orientation {
    let mut o = warm_orientation(graph, level, capped);
    balance_orientation(graph, &mut o).expect("fresh orientation honors its caps");
    o
}
