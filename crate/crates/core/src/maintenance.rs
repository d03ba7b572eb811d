//! Keeping the index current under single-edge insertions and deletions.
//!
//! Both strategies work level by level. For one level only uncapped-side
//! nodes whose rank equals the update *boundary* can move, and only by one;
//! capped-side ranks then follow from their neighbors. The space-efficient
//! strategy decides who moves with one dense-subgraph computation per
//! level. The time-efficient strategy keeps one egalitarian orientation
//! per level and repairs it with a single path reversal.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{GraphError, MaintenanceError};
use crate::flow::{dense_set, LevelPair};
use crate::graph::{BipartiteGraph, EdgeId, NodeRef, Side};
use crate::index::{build_index, level_ranks, row_floor, BdIndex, EgalitarianSet, IndexRow};
use crate::orientation::{
    egalitarian_orientation, max_reachable, min_reacher, orientation_to_rank, reverse_path,
    verify_egalitarian, Orientation, RankTable,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpdateKind {
    Insert,
    Delete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaintenanceMode {
    SpaceEfficient,
    TimeEfficient,
}

/// The single rank at which uncapped-side nodes of one level may move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UpdateBoundary {
    pub capped: Side,
    pub level: u32,
    pub boundary: i32,
    pub kind: UpdateKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateReport {
    pub kind: UpdateKind,
    pub boundaries: Vec<UpdateBoundary>,
    pub p_before: i64,
    pub p_after: i64,
    /// Rows rebuilt because at least one rank changed.
    pub rows_rebuilt: usize,
}

/// The endpoint on the table's capped side and the one on its free side.
fn split(capped: Side, u: NodeRef, v: NodeRef) -> (NodeRef, NodeRef) {
    match capped {
        Side::Upper => (u, v),
        Side::Lower => (v, u),
    }
}

/// `k`-th largest value (1-based) of `values`; reorders the slice.
fn kth_largest(values: &mut [i32], k: usize) -> i32 {
    let (_, x, _) = values.select_nth_unstable_by(k - 1, |a, b| b.cmp(a));
    *x
}

/// Boundary for inserting `(u, v)` into `graph` (pre-insertion state).
///
/// With `c` the endpoint on the capped side, `f` the other one and `k` the
/// level: `r_N` is the `(k+1)`-th highest rank over `N(c) ∪ {f}` (or `-1`
/// when `|N(c)| < k`), and the boundary is `min(r_N, rank(f))`.
pub fn insertion_boundary(graph: &BipartiteGraph, ranks: &RankTable, u: NodeRef, v: NodeRef) -> UpdateBoundary {
    let capped = ranks.capped_side();
    let level = ranks.level();
    let (c, f) = split(capped, u, v);
    let neighbors: &[_] = if graph.contains_node(c) { graph.neighbors(c) } else { &[] };
    let r_n = if neighbors.len() < level as usize {
        -1
    } else {
        let mut values: Vec<i32> = neighbors
            .iter()
            .map(|a| ranks.rank(NodeRef::new(f.side, a.node)))
            .chain(std::iter::once(ranks.rank(f)))
            .collect();
        kth_largest(&mut values, level as usize + 1)
    };
    UpdateBoundary {
        capped,
        level,
        boundary: r_n.min(ranks.rank(f)),
        kind: UpdateKind::Insert,
    }
}

/// Boundary for deleting `(u, v)`: the smaller endpoint rank.
pub fn deletion_boundary(ranks: &RankTable, u: NodeRef, v: NodeRef) -> UpdateBoundary {
    UpdateBoundary {
        capped: ranks.capped_side(),
        level: ranks.level(),
        boundary: ranks.rank(u).min(ranks.rank(v)),
        kind: UpdateKind::Delete,
    }
}

/// Rank of a capped-side node from its neighbors' ranks: `-1` when its
/// degree is at most the level, otherwise the `(level+1)`-th highest.
pub fn capped_rank(graph: &BipartiteGraph, ranks: &RankTable, node: NodeRef) -> i32 {
    let level = ranks.level() as usize;
    let adj = graph.neighbors(node);
    if adj.len() <= level {
        return -1;
    }
    let other = node.side.other();
    let mut values: Vec<i32> = adj.iter().map(|a| ranks.rank(NodeRef::new(other, a.node))).collect();
    kth_largest(&mut values, level + 1)
}

/// Upper-side ranks at level `alpha` from the lower-side ranks.
pub fn recompute_u_ranks(graph: &BipartiteGraph, v_ranks: &[i32], alpha: u32) -> Vec<i32> {
    let table = RankTable::new(alpha, Side::Upper, vec![-1; graph.upper_count()], v_ranks.to_vec());
    graph.nodes(Side::Upper).map(|u| capped_rank(graph, &table, u)).collect()
}

/// Checks that only free-side nodes at the boundary moved, each by one.
pub fn check_locality(before: &RankTable, after: &RankTable, b: &UpdateBoundary) -> Result<(), String> {
    let free = b.capped.other();
    let step = match b.kind {
        UpdateKind::Insert => 1,
        UpdateKind::Delete => -1,
    };
    let n = before.side(free).len().max(after.side(free).len());
    for i in 0..n {
        let x = NodeRef::new(free, i as u32);
        let (old, new) = (before.rank(x), after.rank(x));
        if old != new && (old != b.boundary || new != old + step) {
            return Err(format!(
                "{:?}-capped level {}: {x} moved {old} -> {new}, boundary {}",
                b.capped, b.level, b.boundary
            ));
        }
    }
    Ok(())
}

fn table_for(graph: &BipartiteGraph, o: &Orientation) -> RankTable {
    orientation_to_rank(graph, o)
}

/// Levels of a dense-subgraph query for one side's level and free parameter.
fn pair(capped: Side, level: u32, other: u32) -> LevelPair {
    match capped {
        Side::Upper => LevelPair::new(level, other),
        Side::Lower => LevelPair::new(other, level),
    }
}

/// Recomputes capped-side ranks around `changed` free nodes plus `extra`.
fn refresh_capped(graph: &BipartiteGraph, table: &mut RankTable, changed: &[NodeRef], extra: NodeRef) {
    let mut targets: Vec<NodeRef> = changed
        .iter()
        .flat_map(|&x| graph.neighbors(x).iter().map(move |a| NodeRef::new(x.side.other(), a.node)))
        .collect();
    targets.push(extra);
    targets.sort_unstable();
    targets.dedup();
    for c in targets {
        let r = capped_rank(graph, table, c);
        table.set(c, r);
    }
}

/// One level of the space-efficient insertion; `graph` already holds the edge.
fn space_insert_level(graph: &BipartiteGraph, table: &mut RankTable, b: UpdateBoundary, u: NodeRef, v: NodeRef) -> bool {
    let before = table.clone();
    let (c, _) = split(b.capped, u, v);
    let free = b.capped.other();
    let d = dense_set(graph, pair(b.capped, b.level, (b.boundary + 1) as u32));
    let changed: Vec<NodeRef> = graph
        .nodes(free)
        .filter(|&x| table.rank(x) == b.boundary && d.contains(x))
        .collect();
    for &x in &changed {
        table.set(x, b.boundary + 1);
    }
    refresh_capped(graph, table, &changed, c);
    *table != before
}

/// One level of the space-efficient deletion; `graph` no longer holds the edge.
fn space_delete_level(graph: &BipartiteGraph, table: &mut RankTable, b: UpdateBoundary, u: NodeRef, v: NodeRef) -> bool {
    let before = table.clone();
    let (c, _) = split(b.capped, u, v);
    let free = b.capped.other();
    let mut changed = Vec::new();
    if b.boundary >= 0 {
        let d = dense_set(graph, pair(b.capped, b.level, b.boundary as u32));
        changed = graph
            .nodes(free)
            .filter(|&x| table.rank(x) == b.boundary && !d.contains(x))
            .collect();
        for &x in &changed {
            table.set(x, b.boundary - 1);
        }
    }
    refresh_capped(graph, table, &changed, c);
    *table != before
}

/// Moves free-side ranks at `b.boundary` to match the repaired orientation
/// `o`, then refreshes the capped side around them and `c`. `table` holds
/// the ranks from before the update.
fn shift_boundary(graph: &BipartiteGraph, o: &Orientation, table: &mut RankTable, b: &UpdateBoundary, c: NodeRef) -> bool {
    let free = b.capped.other();
    let threshold = match b.kind {
        UpdateKind::Insert => b.boundary + 2,
        UpdateKind::Delete => b.boundary + 1,
    };
    let in_r = |t: &RankTable, x: NodeRef| x == c || t.rank(x) == b.boundary;
    let mut reach = [vec![false; graph.upper_count()], vec![false; graph.lower_count()]];
    let mut queue = VecDeque::new();
    let members = Side::BOTH
        .into_iter()
        .flat_map(|s| graph.nodes(s))
        .filter(|&x| in_r(table, x));
    for y in members {
        let seed = (y.side == free && o.indegree(y) as i32 >= threshold)
            || graph.neighbors(y).iter().any(|a| {
                let w = NodeRef::new(y.side.other(), a.node);
                !o.points_into(a.edge, y) && !in_r(table, w) && table.rank(w) + 1 >= threshold
            });
        if seed {
            reach[y.side.slot()][y.index as usize] = true;
            queue.push_back(y);
        }
    }
    while let Some(z) = queue.pop_front() {
        for a in graph.neighbors(z) {
            let x = NodeRef::new(z.side.other(), a.node);
            if o.points_into(a.edge, z) && !reach[x.side.slot()][x.index as usize] && in_r(table, x) {
                reach[x.side.slot()][x.index as usize] = true;
                queue.push_back(x);
            }
        }
    }
    let changed: Vec<NodeRef> = graph
        .nodes(free)
        .filter(|&x| table.rank(x) == b.boundary && reach[free.slot()][x.index as usize] == (b.kind == UpdateKind::Insert))
        .collect();
    let step = if b.kind == UpdateKind::Insert { 1 } else { -1 };
    for &x in &changed {
        table.set(x, b.boundary + step);
    }
    let before = table.rank(c);
    refresh_capped(graph, table, &changed, c);
    !changed.is_empty() || table.rank(c) != before
}

/// Checked mode: compares the incremental ranks with a full recomputation.
fn confirm_ranks(graph: &BipartiteGraph, o: &Orientation, table: &RankTable) -> Result<(), String> {
    let fresh = orientation_to_rank(graph, o);
    if fresh != *table {
        return Err(format!(
            "{:?}-capped level {}: incremental ranks disagree with the orientation",
            o.capped_side(),
            o.level()
        ));
    }
    Ok(())
}

/// One level of the time-efficient insertion. `graph` holds edge `e`;
/// `pre_degree` is the capped endpoint's degree before the insertion.
#[allow(clippy::too_many_arguments)]
fn time_insert_level(
    graph: &BipartiteGraph,
    o: &mut Orientation,
    table: &mut RankTable,
    b: &UpdateBoundary,
    e: EdgeId,
    (u, v): (NodeRef, NodeRef),
    pre_degree: usize,
    checked: bool,
) -> Result<bool, String> {
    let (c, _) = split(o.capped_side(), u, v);
    o.attach_edge(graph, e, c);
    table.sync(graph);
    if pre_degree < o.level() as usize {
        return Ok(false);
    }
    let reach = min_reacher(graph, o, c).expect("the free endpoint reaches the capped one");
    reverse_path(graph, o, &reach.nodes).expect("search returns a directed path");
    let changed = shift_boundary(graph, o, table, b, c);
    if checked {
        confirm_ranks(graph, o, table)?;
    }
    Ok(changed)
}

/// Path repair of the time-efficient deletion; runs while the edge is still
/// in `graph` and detaches it from the orientation. Returns whether ranks
/// at this level can change.
fn time_delete_level(graph: &BipartiteGraph, o: &mut Orientation, e: EdgeId, u: NodeRef, v: NodeRef) -> bool {
    let (c, f) = split(o.capped_side(), u, v);
    let saturated = graph.degree(c) > o.level() as usize;
    if saturated {
        if o.points_into(e, c) {
            let reach = max_reachable(graph, o, c, false).expect("a saturated capped node has an out-edge");
            reverse_path(graph, o, &reach.nodes).expect("search returns a directed path");
        } else {
            let reach = max_reachable(graph, o, f, true).expect("start node is a candidate");
            if reach.node != f {
                reverse_path(graph, o, &reach.nodes).expect("search returns a directed path");
            }
        }
    }
    o.detach_edge(graph, e);
    saturated
}

/// A graph together with its index, kept in sync under edge updates.
#[derive(Debug, Clone)]
pub struct DynamicIndex {
    graph: BipartiteGraph,
    index: BdIndex,
    tables: [Vec<RankTable>; 2],
    orientations: Option<EgalitarianSet>,
    checked: bool,
}

impl DynamicIndex {
    /// Builds the index for `graph`. Time-efficient mode keeps the
    /// orientations alive; space-efficient mode drops them.
    pub fn new(graph: BipartiteGraph, mode: MaintenanceMode) -> Self {
        let (index, set) = build_index(&graph);
        let tables = [
            set.upper.iter().map(|o| table_for(&graph, o)).collect(),
            set.lower.iter().map(|o| table_for(&graph, o)).collect(),
        ];
        DynamicIndex {
            graph,
            index,
            tables,
            orientations: (mode == MaintenanceMode::TimeEfficient).then_some(set),
            checked: false,
        }
    }

    /// Space-efficient maintenance on top of an existing index; the full
    /// rank tables are recovered from the rows.
    pub fn from_index(graph: BipartiteGraph, index: BdIndex) -> Self {
        let (nu, nv) = (graph.upper_count(), graph.lower_count());
        let levels = (index.p() + 1) as u32;
        let tables = [
            (0..levels).map(|k| index.rank_table(Side::Upper, k, nu, nv)).collect(),
            (0..levels).map(|k| index.rank_table(Side::Lower, k, nu, nv)).collect(),
        ];
        DynamicIndex {
            graph,
            index,
            tables,
            orientations: None,
            checked: false,
        }
    }

    /// Enables per-update self checks: orientations are verified before
    /// time-efficient updates and rank movement is checked against the
    /// boundaries afterwards.
    pub fn set_checked(&mut self, checked: bool) {
        self.checked = checked;
    }

    pub fn mode(&self) -> MaintenanceMode {
        if self.orientations.is_some() {
            MaintenanceMode::TimeEfficient
        } else {
            MaintenanceMode::SpaceEfficient
        }
    }

    /// Switches to time-efficient mode, building orientations if needed.
    pub fn enable_time_mode(&mut self) {
        if self.orientations.is_none() {
            let levels = (self.index.p() + 1) as u32;
            let g = &self.graph;
            self.orientations = Some(EgalitarianSet {
                upper: (0..levels).map(|k| egalitarian_orientation(g, k, Side::Upper)).collect(),
                lower: (0..levels).map(|k| egalitarian_orientation(g, k, Side::Lower)).collect(),
            });
        }
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn index(&self) -> &BdIndex {
        &self.index
    }

    pub fn tables(&self, capped: Side) -> &[RankTable] {
        &self.tables[capped.slot()]
    }

    pub fn orientations(&self) -> Option<&EgalitarianSet> {
        self.orientations.as_ref()
    }

    pub fn into_parts(self) -> (BipartiteGraph, BdIndex) {
        (self.graph, self.index)
    }

    pub fn insert(&mut self, u: NodeRef, v: NodeRef) -> Result<UpdateReport, MaintenanceError> {
        match self.mode() {
            MaintenanceMode::SpaceEfficient => self.insert_s(u, v),
            MaintenanceMode::TimeEfficient => self.insert_t(u, v),
        }
    }

    pub fn delete(&mut self, u: NodeRef, v: NodeRef) -> Result<UpdateReport, MaintenanceError> {
        match self.mode() {
            MaintenanceMode::SpaceEfficient => self.delete_s(u, v),
            MaintenanceMode::TimeEfficient => self.delete_t(u, v),
        }
    }

    fn check_insert(&self, u: NodeRef, v: NodeRef) -> Result<(), MaintenanceError> {
        if u.side != Side::Upper || v.side != Side::Lower {
            return Err(GraphError::WrongSides { u, v }.into());
        }
        if self.graph.contains_node(u) && self.graph.contains_node(v) && self.graph.has_edge(u.index, v.index) {
            return Err(GraphError::DuplicateEdge { u, v }.into());
        }
        Ok(())
    }

    fn check_delete(&self, u: NodeRef, v: NodeRef) -> Result<EdgeId, MaintenanceError> {
        if u.side != Side::Upper || v.side != Side::Lower {
            return Err(GraphError::WrongSides { u, v }.into());
        }
        if !self.graph.contains_node(u) {
            return Err(GraphError::InvalidNode(u).into());
        }
        if !self.graph.contains_node(v) {
            return Err(GraphError::InvalidNode(v).into());
        }
        self.graph
            .edge_id(u.index, v.index)
            .ok_or_else(|| GraphError::MissingEdge { u, v }.into())
    }

    fn boundaries(&self, kind: UpdateKind, u: NodeRef, v: NodeRef) -> Vec<UpdateBoundary> {
        Side::BOTH
            .iter()
            .flat_map(|&s| self.tables[s.slot()].iter())
            .map(|t| match kind {
                UpdateKind::Insert => insertion_boundary(&self.graph, t, u, v),
                UpdateKind::Delete => deletion_boundary(t, u, v),
            })
            .collect()
    }

    fn grow_nodes(&mut self, u: NodeRef, v: NodeRef) {
        self.graph.ensure_node(u);
        self.graph.ensure_node(v);
        for t in self.tables.iter_mut().flatten() {
            t.sync(&self.graph);
        }
        if let Some(set) = &mut self.orientations {
            for o in set.upper.iter_mut().chain(set.lower.iter_mut()) {
                o.sync(&self.graph);
            }
        }
    }

    fn verify_orientations(&self) -> Result<(), MaintenanceError> {
        let Some(set) = &self.orientations else {
            return Err(MaintenanceError::Integrity("time-efficient update without orientations".into()));
        };
        if !self.checked {
            return Ok(());
        }
        for o in set.upper.iter().chain(&set.lower) {
            verify_egalitarian(&self.graph, o).map_err(|e| {
                MaintenanceError::Integrity(format!(
                    "{:?}-capped level {} orientation is stale: {e:?}",
                    o.capped_side(),
                    o.level()
                ))
            })?;
        }
        Ok(())
    }

    fn check_moves(&self, before: &Option<[Vec<RankTable>; 2]>, bounds: &[UpdateBoundary]) -> Result<(), MaintenanceError> {
        let Some(before) = before else {
            return Ok(());
        };
        for b in bounds {
            let s = b.capped.slot();
            let k = b.level as usize;
            if let (Some(old), Some(new)) = (before[s].get(k), self.tables[s].get(k)) {
                check_locality(old, new, b).map_err(MaintenanceError::Integrity)?;
            }
        }
        Ok(())
    }

    /// Rebuilds the rows of levels flagged in `dirty` (upper levels first).
    fn refresh_rows(&mut self, dirty: &[bool]) -> usize {
        let levels = self.tables[0].len();
        let mut rebuilt = 0;
        for (i, _) in dirty.iter().enumerate().filter(|(_, &d)| d) {
            let (side, k) = if i < levels { (Side::Upper, i) } else { (Side::Lower, i - levels) };
            let row = IndexRow::from_ranks(&self.tables[side.slot()][k], row_floor(side, k as u32));
            self.index.rows_mut(side)[k] = row;
            rebuilt += 1;
        }
        rebuilt
    }

    /// Adds levels while `D(p+1, p+1)` is nonempty.
    fn grow_p(&mut self) {
        loop {
            let p = self.index.p();
            let next = (p + 1) as u32;
            let nonempty = if p < 0 {
                self.graph.edge_count() > 0
            } else {
                // D(p+1, p+1) lies inside D(p, p+1), so searching there suffices
                let top = &self.tables[0][p as usize];
                let keep: [Vec<bool>; 2] = [
                    top.side(Side::Upper).iter().map(|&r| r >= next as i32).collect(),
                    top.side(Side::Lower).iter().map(|&r| r >= next as i32).collect(),
                ];
                let sub = self.graph.induced(&keep[0], &keep[1]);
                !dense_set(&sub, LevelPair::new(next, next)).is_empty()
            };
            if !nonempty {
                return;
            }
            for side in Side::BOTH {
                let (o, t) = level_ranks(&self.graph, next, side);
                self.index.rows_mut(side).push(IndexRow::from_ranks(&t, row_floor(side, next)));
                self.tables[side.slot()].push(t);
                if let Some(set) = &mut self.orientations {
                    set.side_mut(side).push(o);
                }
            }
            self.index.set_p(p + 1);
        }
    }

    /// Drops top levels whose diagonal subgraph emptied.
    fn shrink_p(&mut self) {
        while self.index.p() >= 0 {
            let p = self.index.p();
            if self.tables[0][p as usize].max_rank() >= p as i32 {
                return;
            }
            for side in Side::BOTH {
                self.tables[side.slot()].pop();
                self.index.rows_mut(side).pop();
                if let Some(set) = &mut self.orientations {
                    set.side_mut(side).pop();
                }
            }
            self.index.set_p(p - 1);
        }
    }

    fn snapshot(&self) -> Option<[Vec<RankTable>; 2]> {
        self.checked.then(|| self.tables.clone())
    }

    /// Space-efficient insertion. Drops any orientations, since they are
    /// not maintained by this path.
    pub fn insert_s(&mut self, u: NodeRef, v: NodeRef) -> Result<UpdateReport, MaintenanceError> {
        self.check_insert(u, v)?;
        self.orientations = None;
        let p_before = self.index.p();
        let bounds = self.boundaries(UpdateKind::Insert, u, v);
        self.grow_nodes(u, v);
        let before = self.snapshot();
        self.graph.insert_edge(u, v)?;
        let graph = &self.graph;
        let dirty: Vec<bool> = self
            .tables
            .iter_mut()
            .flatten()
            .zip(&bounds)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(t, &b)| space_insert_level(graph, t, b, u, v))
            .collect();
        self.check_moves(&before, &bounds)?;
        let rows_rebuilt = self.refresh_rows(&dirty);
        self.grow_p();
        Ok(UpdateReport {
            kind: UpdateKind::Insert,
            boundaries: bounds,
            p_before,
            p_after: self.index.p(),
            rows_rebuilt,
        })
    }

    /// Space-efficient deletion.
    pub fn delete_s(&mut self, u: NodeRef, v: NodeRef) -> Result<UpdateReport, MaintenanceError> {
        self.check_delete(u, v)?;
        self.orientations = None;
        let p_before = self.index.p();
        let bounds = self.boundaries(UpdateKind::Delete, u, v);
        let before = self.snapshot();
        self.graph.delete_edge(u, v)?;
        let graph = &self.graph;
        let dirty: Vec<bool> = self
            .tables
            .iter_mut()
            .flatten()
            .zip(&bounds)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(t, &b)| space_delete_level(graph, t, b, u, v))
            .collect();
        self.check_moves(&before, &bounds)?;
        let rows_rebuilt = self.refresh_rows(&dirty);
        self.shrink_p();
        Ok(UpdateReport {
            kind: UpdateKind::Delete,
            boundaries: bounds,
            p_before,
            p_after: self.index.p(),
            rows_rebuilt,
        })
    }

    /// Time-efficient insertion.
    pub fn insert_t(&mut self, u: NodeRef, v: NodeRef) -> Result<UpdateReport, MaintenanceError> {
        self.check_insert(u, v)?;
        self.verify_orientations()?;
        let p_before = self.index.p();
        let pre = [
            if self.graph.contains_node(u) { self.graph.degree(u) } else { 0 },
            if self.graph.contains_node(v) { self.graph.degree(v) } else { 0 },
        ];
        self.grow_nodes(u, v);
        let bounds = self.boundaries(UpdateKind::Insert, u, v);
        let before = self.snapshot();
        let e = self.graph.insert_edge(u, v)?;
        let graph = &self.graph;
        let checked = self.checked;
        let set = self.orientations.as_mut().expect("verified above");
        let dirty: Vec<bool> = set
            .upper
            .iter_mut()
            .chain(set.lower.iter_mut())
            .zip(self.tables.iter_mut().flatten())
            .zip(&bounds)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|((o, t), b)| {
                let pre_degree = pre[o.capped_side().slot()];
                time_insert_level(graph, o, t, b, e, (u, v), pre_degree, checked)
            })
            .collect::<Result<_, _>>()
            .map_err(MaintenanceError::Integrity)?;
        self.check_moves(&before, &bounds)?;
        let rows_rebuilt = self.refresh_rows(&dirty);
        self.grow_p();
        Ok(UpdateReport {
            kind: UpdateKind::Insert,
            boundaries: bounds,
            p_before,
            p_after: self.index.p(),
            rows_rebuilt,
        })
    }

    /// Time-efficient deletion.
    pub fn delete_t(&mut self, u: NodeRef, v: NodeRef) -> Result<UpdateReport, MaintenanceError> {
        let e = self.check_delete(u, v)?;
        self.verify_orientations()?;
        let p_before = self.index.p();
        let bounds = self.boundaries(UpdateKind::Delete, u, v);
        let before = self.snapshot();
        let saturated: Vec<bool> = {
            let graph = &self.graph;
            let set = self.orientations.as_mut().expect("verified above");
            set.upper
                .par_iter_mut()
                .chain(set.lower.par_iter_mut())
                .map(|o| time_delete_level(graph, o, e, u, v))
                .collect()
        };
        self.graph.delete_edge(u, v)?;
        let graph = &self.graph;
        let checked = self.checked;
        let set = self.orientations.as_ref().expect("verified above");
        let dirty: Vec<bool> = set
            .upper
            .iter()
            .chain(&set.lower)
            .zip(self.tables.iter_mut().flatten())
            .zip(bounds.iter().zip(saturated))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|((o, t), (b, saturated))| {
                let (c, _) = split(o.capped_side(), u, v);
                let changed = saturated && shift_boundary(graph, o, t, b, c);
                if checked {
                    confirm_ranks(graph, o, t)?;
                }
                Ok(changed)
            })
            .collect::<Result<_, String>>()
            .map_err(MaintenanceError::Integrity)?;
        self.check_moves(&before, &bounds)?;
        let rows_rebuilt = self.refresh_rows(&dirty);
        self.shrink_p();
        Ok(UpdateReport {
            kind: UpdateKind::Delete,
            boundaries: bounds,
            p_before,
            p_after: self.index.p(),
            rows_rebuilt,
        })
    }
}
