//! The dense-subgraph index: rank-sorted node lists with cursor offsets.
//!
//! Upper row `α` lists every node whose level-`α` rank (upper side capped)
//! is at least `α`; lower row `β` lists every node whose level-`β` rank
//! (lower side capped) is strictly greater than `β`. Rows are sorted by
//! rank, ties by `(side, index)`, and `cursors[b - lo]` is the first
//! position holding rank `≥ b`. A query `(α, β)` reads one row suffix.

use rayon::prelude::*;

use crate::error::FormatError;
use crate::flow::compute_p;
use crate::graph::{BipartiteGraph, NodeRef, Side};
use crate::io::IdMap;
use crate::orientation::{egalitarian_orientation, orientation_to_rank, Orientation, RankTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexRow {
    level: u32,
    nodes: Vec<NodeRef>,
    ranks: Vec<i32>,
    cursor_lo: i32,
    cursors: Vec<u32>,
}

impl IndexRow {
    /// Assembles a row from a full rank table, keeping nodes ranked `≥ min_rank`.
    pub fn from_ranks(table: &RankTable, min_rank: i32) -> IndexRow {
        let level = table.level();
        let max = table.max_rank();
        if max < min_rank {
            return IndexRow {
                level,
                nodes: Vec::new(),
                ranks: Vec::new(),
                cursor_lo: min_rank,
                cursors: Vec::new(),
            };
        }
        // stable counting sort by rank over (side, index) order
        let width = (max - min_rank + 1) as usize;
        let mut counts = vec![0u32; width + 1];
        for side in Side::BOTH {
            for &r in table.side(side) {
                if r >= min_rank {
                    counts[(r - min_rank) as usize + 1] += 1;
                }
            }
        }
        for i in 1..=width {
            counts[i] += counts[i - 1];
        }
        let cursors = counts[..width].to_vec();
        let len = counts[width] as usize;
        let mut nodes = vec![NodeRef::upper(0); len];
        let mut ranks = vec![0; len];
        let mut next = counts;
        for side in Side::BOTH {
            for (i, &r) in table.side(side).iter().enumerate() {
                if r >= min_rank {
                    let slot = &mut next[(r - min_rank) as usize];
                    nodes[*slot as usize] = NodeRef::new(side, i as u32);
                    ranks[*slot as usize] = r;
                    *slot += 1;
                }
            }
        }
        IndexRow {
            level,
            nodes,
            ranks,
            cursor_lo: min_rank,
            cursors,
        }
    }

    #[inline]
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn nodes(&self) -> &[NodeRef] {
        &self.nodes
    }

    pub fn ranks(&self) -> &[i32] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn cursors(&self) -> &[u32] {
        &self.cursors
    }

    /// Inclusive cursor range; empty when `hi < lo`.
    pub fn cursor_range(&self) -> (i32, i32) {
        (self.cursor_lo, self.cursor_lo + self.cursors.len() as i32 - 1)
    }

    /// Rank of `node` in this row, if listed.
    pub fn rank_of(&self, node: NodeRef) -> Option<i32> {
        self.nodes.iter().position(|&n| n == node).map(|i| self.ranks[i])
    }

    /// `(node, rank)` pairs sorted by node, independent of intra-rank order.
    pub fn entries_sorted(&self) -> Vec<(NodeRef, i32)> {
        let mut v: Vec<_> = self.nodes.iter().copied().zip(self.ranks.iter().copied()).collect();
        v.sort();
        v
    }
}

/// The orientations an index was built from, one per level and side.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EgalitarianSet {
    pub upper: Vec<Orientation>,
    pub lower: Vec<Orientation>,
}

impl EgalitarianSet {
    pub fn side(&self, capped: Side) -> &[Orientation] {
        match capped {
            Side::Upper => &self.upper,
            Side::Lower => &self.lower,
        }
    }

    pub fn side_mut(&mut self, capped: Side) -> &mut Vec<Orientation> {
        match capped {
            Side::Upper => &mut self.upper,
            Side::Lower => &mut self.lower,
        }
    }

    pub fn len(&self) -> usize {
        self.upper.len() + self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BdIndex {
    p: i64,
    upper: Vec<IndexRow>,
    lower: Vec<IndexRow>,
}

/// Work done by one query: list entries read plus range comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QueryCost {
    pub entries: usize,
    pub range_checks: u32,
}

impl QueryCost {
    pub fn touched(self) -> usize {
        self.entries + self.range_checks as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IndexStats {
    pub p: i64,
    pub upper_entries: usize,
    pub lower_entries: usize,
    pub upper_cursors: usize,
    pub lower_cursors: usize,
    pub entry_count: usize,
    pub cursor_count: usize,
    /// 4 bytes per node id, 4 per rank, 4 per cursor.
    pub model_bytes: usize,
}

/// Lowest rank listed in a row of `capped` side at `level`.
#[inline]
pub(crate) fn row_floor(capped: Side, level: u32) -> i32 {
    match capped {
        Side::Upper => level as i32,
        Side::Lower => level as i32 + 1,
    }
}

/// Rank table for one level from a fresh egalitarian orientation.
pub fn level_ranks(graph: &BipartiteGraph, level: u32, capped: Side) -> (Orientation, RankTable) {
    let o = egalitarian_orientation(graph, level, capped);
    let t = orientation_to_rank(graph, &o);
    (o, t)
}

/// Builds the index and the orientations behind it.
pub fn build_index(graph: &BipartiteGraph) -> (BdIndex, EgalitarianSet) {
    let p = compute_p(graph);
    let jobs: Vec<(Side, u32)> = Side::BOTH
        .iter()
        .flat_map(|&s| (0..=p).map(move |k| (s, k as u32)))
        .collect();
    let built: Vec<(Side, Orientation, IndexRow)> = jobs
        .into_par_iter()
        .map(|(side, level)| {
            let (o, t) = level_ranks(graph, level, side);
            let row = IndexRow::from_ranks(&t, row_floor(side, level));
            (side, o, row)
        })
        .collect();
    let mut index = BdIndex::empty();
    index.p = p;
    let mut set = EgalitarianSet::default();
    for (side, o, row) in built {
        index.rows_mut(side).push(row);
        set.side_mut(side).push(o);
    }
    debug_assert!(p < 0 || !index.upper[p as usize].is_empty());
    (index, set)
}

/// Alias of [`build_index`], used as the from-scratch baseline.
pub fn rebuild(graph: &BipartiteGraph) -> (BdIndex, EgalitarianSet) {
    build_index(graph)
}

impl BdIndex {
    /// The index of an edgeless graph.
    pub fn empty() -> BdIndex {
        BdIndex {
            p: -1,
            upper: Vec::new(),
            lower: Vec::new(),
        }
    }

    /// Assembles an index from per-level rank tables (levels `0..=p`).
    pub fn from_tables(upper: &[RankTable], lower: &[RankTable]) -> BdIndex {
        assert_eq!(upper.len(), lower.len());
        BdIndex {
            p: upper.len() as i64 - 1,
            upper: upper
                .iter()
                .enumerate()
                .map(|(k, t)| IndexRow::from_ranks(t, row_floor(Side::Upper, k as u32)))
                .collect(),
            lower: lower
                .iter()
                .enumerate()
                .map(|(k, t)| IndexRow::from_ranks(t, row_floor(Side::Lower, k as u32)))
                .collect(),
        }
    }

    #[inline]
    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn rows(&self, capped: Side) -> &[IndexRow] {
        match capped {
            Side::Upper => &self.upper,
            Side::Lower => &self.lower,
        }
    }

    pub(crate) fn rows_mut(&mut self, capped: Side) -> &mut Vec<IndexRow> {
        match capped {
            Side::Upper => &mut self.upper,
            Side::Lower => &mut self.lower,
        }
    }

    pub(crate) fn set_p(&mut self, p: i64) {
        self.p = p;
    }

    /// `D(α, β)` as a slice of one row.
    pub fn query(&self, alpha: u32, beta: u32) -> &[NodeRef] {
        self.query_counted(alpha, beta).0
    }

    pub fn query_counted(&self, alpha: u32, beta: u32) -> (&[NodeRef], QueryCost) {
        let (level, other, rows) = if alpha <= beta {
            (alpha, beta, &self.upper)
        } else {
            (beta, alpha, &self.lower)
        };
        let mut cost = QueryCost {
            entries: 0,
            range_checks: 1,
        };
        let Some(row) = rows.get(level as usize) else {
            return (&[], cost);
        };
        cost.range_checks += 1;
        let (lo, hi) = row.cursor_range();
        let b = other as i64;
        if b < lo as i64 || b > hi as i64 {
            return (&[], cost);
        }
        let start = row.cursors[(b - lo as i64) as usize] as usize;
        let out = &row.nodes[start..];
        cost.entries = out.len();
        (out, cost)
    }

    /// Full rank table for one level, recovered from the rows alone.
    ///
    /// Ranks below a row's floor are read from the other side's rows: for
    /// upper level `α`, a node unlisted in row `α` has rank
    /// `max{β < α : its lower-level-β rank ≥ α}`; symmetrically for lower
    /// level `β` with `max{α ≤ β : its upper-level-α rank ≥ β}`.
    pub fn rank_table(&self, capped: Side, level: u32, upper_count: usize, lower_count: usize) -> RankTable {
        let mut t = RankTable::unranked(level, capped, upper_count, lower_count);
        let Some(row) = self.rows(capped).get(level as usize) else {
            return t;
        };
        let other_levels: Vec<u32> = match capped {
            Side::Upper => (0..level).collect(),
            Side::Lower => (0..=level).collect(),
        };
        for k in other_levels {
            let other = &self.rows(capped.other())[k as usize];
            for (&x, &r) in other.nodes.iter().zip(&other.ranks) {
                if r >= level as i32 && (x.index as usize) < side_len(x.side, upper_count, lower_count) {
                    t.set(x, k as i32);
                }
            }
        }
        for (&x, &r) in row.nodes.iter().zip(&row.ranks) {
            t.set(x, r);
        }
        t
    }

    pub fn stats(&self) -> IndexStats {
        let count = |rows: &[IndexRow]| -> (usize, usize) {
            rows.iter().fold((0, 0), |(e, c), r| (e + r.len(), c + r.cursors.len()))
        };
        let (ue, uc) = count(&self.upper);
        let (le, lc) = count(&self.lower);
        IndexStats {
            p: self.p,
            upper_entries: ue,
            lower_entries: le,
            upper_cursors: uc,
            lower_cursors: lc,
            entry_count: ue + le,
            cursor_count: uc + lc,
            model_bytes: 8 * (ue + le) + 4 * (uc + lc),
        }
    }
}

fn side_len(side: Side, upper_count: usize, lower_count: usize) -> usize {
    match side {
        Side::Upper => upper_count,
        Side::Lower => lower_count,
    }
}

const MAGIC: &[u8; 4] = b"BDIX";
const ID_MAGIC: &[u8; 4] = b"IDMP";
pub const FORMAT_VERSION: u32 = 1;
const LOWER_BIT: u32 = 1 << 31;

/// Encodes the index, optionally followed by the external id map.
pub fn serialize(index: &BdIndex, ids: Option<&IdMap>) -> Vec<u8> {
    let stats = index.stats();
    let mut out = Vec::with_capacity(16 + stats.model_bytes + 24 * (index.upper.len() + 1));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(index.p as i32).to_le_bytes());
    for rows in [&index.upper, &index.lower] {
        out.extend_from_slice(&(rows.len() as u32).to_le_bytes());
        for row in rows {
            out.extend_from_slice(&row.level.to_le_bytes());
            out.extend_from_slice(&(row.nodes.len() as u32).to_le_bytes());
            for n in &row.nodes {
                let raw = match n.side {
                    Side::Upper => n.index,
                    Side::Lower => n.index | LOWER_BIT,
                };
                out.extend_from_slice(&raw.to_le_bytes());
            }
            for r in &row.ranks {
                out.extend_from_slice(&r.to_le_bytes());
            }
            let (lo, hi) = row.cursor_range();
            out.extend_from_slice(&lo.to_le_bytes());
            out.extend_from_slice(&hi.to_le_bytes());
            for c in &row.cursors {
                out.extend_from_slice(&c.to_le_bytes());
            }
        }
    }
    if let Some(ids) = ids {
        out.extend_from_slice(ID_MAGIC);
        for side in Side::BOTH {
            let list = ids.ids(side);
            out.extend_from_slice(&(list.len() as u32).to_le_bytes());
            for id in list {
                out.extend_from_slice(&id.to_le_bytes());
            }
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn fail<T>(&self, at: usize, reason: impl Into<String>) -> Result<T, FormatError> {
        Err(FormatError {
            offset: at,
            reason: reason.into(),
        })
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8], FormatError> {
        if self.bytes.len() - self.pos < n {
            return self.fail(self.pos, format!("truncated {what}"));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn i32(&mut self, what: &str) -> Result<i32, FormatError> {
        Ok(i32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    /// Length prefix that must fit in the remaining bytes at `unit` each.
    fn count(&mut self, unit: usize, what: &str) -> Result<usize, FormatError> {
        let at = self.pos;
        let n = self.u32(what)? as usize;
        if n.saturating_mul(unit) > self.bytes.len() - self.pos {
            return self.fail(at, format!("{what} {n} exceeds remaining input"));
        }
        Ok(n)
    }

    fn row(&mut self, capped: Side, expect_level: u32) -> Result<IndexRow, FormatError> {
        let at = self.pos;
        let level = self.u32("row level")?;
        if level != expect_level {
            return self.fail(at, format!("row level {level}, expected {expect_level}"));
        }
        let len = self.count(8, "row length")?;
        let mut nodes = Vec::with_capacity(len);
        let mut seen = std::collections::HashSet::with_capacity(len);
        for _ in 0..len {
            let at = self.pos;
            let raw = self.u32("node entry")?;
            let node = if raw & LOWER_BIT != 0 {
                NodeRef::lower(raw & !LOWER_BIT)
            } else {
                NodeRef::upper(raw)
            };
            if !seen.insert(node) {
                return self.fail(at, format!("node {node} listed twice"));
            }
            nodes.push(node);
        }
        let floor = row_floor(capped, level);
        let mut ranks = Vec::with_capacity(len);
        for _ in 0..len {
            let at = self.pos;
            let r = self.i32("rank")?;
            if r < floor {
                return self.fail(at, format!("rank {r} below row floor {floor}"));
            }
            if ranks.last().is_some_and(|&prev| r < prev) {
                return self.fail(at, "ranks not sorted");
            }
            ranks.push(r);
        }
        let at = self.pos;
        let lo = self.i32("cursor range")?;
        let hi = self.i32("cursor range")?;
        let want_hi = ranks.last().copied().unwrap_or(floor - 1);
        if lo != floor || hi != want_hi {
            return self.fail(at, format!("cursor range [{lo}, {hi}], expected [{floor}, {want_hi}]"));
        }
        let width = (hi - lo + 1) as usize;
        if width.saturating_mul(4) > self.bytes.len() - self.pos {
            return self.fail(at, "cursor table exceeds remaining input");
        }
        let mut cursors = Vec::with_capacity(width);
        for b in lo..=hi {
            let at = self.pos;
            let c = self.u32("cursor")?;
            let want = ranks.partition_point(|&r| r < b) as u32;
            if c != want {
                return self.fail(at, format!("cursor for {b} is {c}, expected {want}"));
            }
            cursors.push(c);
        }
        Ok(IndexRow {
            level,
            nodes,
            ranks,
            cursor_lo: lo,
            cursors,
        })
    }
}

/// Decodes an index file. Any structural inconsistency is an error naming
/// the byte offset; no partially decoded index is ever returned.
pub fn deserialize(bytes: &[u8]) -> Result<(BdIndex, Option<IdMap>), FormatError> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4, "magic")? != MAGIC {
        return r.fail(0, "bad magic");
    }
    let version = r.u32("version")?;
    if version != FORMAT_VERSION {
        return r.fail(4, format!("unsupported version {version}"));
    }
    let p = r.i32("p")?;
    if p < -1 {
        return r.fail(8, format!("invalid p {p}"));
    }
    let mut index = BdIndex::empty();
    index.p = p as i64;
    for side in Side::BOTH {
        let at = r.pos;
        let rows = r.u32("row count")?;
        if rows as i64 != p as i64 + 1 {
            return r.fail(at, format!("{rows} rows for p = {p}"));
        }
        for k in 0..rows {
            let row = r.row(side, k)?;
            index.rows_mut(side).push(row);
        }
    }
    if p >= 0 && index.upper[p as usize].is_empty() {
        return r.fail(12, "top upper row is empty");
    }
    let ids = if r.pos == bytes.len() {
        None
    } else {
        let at = r.pos;
        if r.take(4, "trailer magic")? != ID_MAGIC {
            return r.fail(at, "trailing bytes after index");
        }
        let mut lists = Vec::new();
        for _ in 0..2 {
            let n = r.count(8, "id count")?;
            let mut list = Vec::with_capacity(n);
            for _ in 0..n {
                list.push(r.u64("external id")?);
            }
            lists.push(list);
        }
        if r.pos != bytes.len() {
            return r.fail(r.pos, "trailing bytes after id map");
        }
        let lower = lists.pop().unwrap();
        let upper = lists.pop().unwrap();
        let map = IdMap::from_lists(upper, lower).map_err(|reason| FormatError { offset: at, reason })?;
        Some(map)
    };
    Ok((index, ids))
}
