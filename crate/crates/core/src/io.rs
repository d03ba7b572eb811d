//! Text formats: KONECT-style edge lists and `+ u v` / `- u v` update streams.
//!
//! Lines beginning with `%` or `#` are comments and blank lines are skipped.
//! External ids are positive integers; each side has its own namespace and
//! ids are mapped to dense indices in order of first appearance.

use std::collections::HashMap;
use std::io::{self, Write};

use crate::error::ParseError;
use crate::graph::{BipartiteGraph, NodeRef, Side};

/// Bidirectional mapping between external ids and dense node indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdMap {
    external: [Vec<u64>; 2],
    internal: [HashMap<u64, u32>; 2],
}

impl IdMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a map from explicit per-side id lists (index `i` has id `ids[i]`).
    pub fn from_lists(upper: Vec<u64>, lower: Vec<u64>) -> Result<Self, String> {
        let mut map = IdMap::new();
        for (side, list) in [(Side::Upper, upper), (Side::Lower, lower)] {
            for id in list {
                if map.get(side, id).is_some() {
                    return Err(format!("duplicate external id {id}"));
                }
                map.intern(side, id);
            }
        }
        Ok(map)
    }

    pub fn len(&self, side: Side) -> usize {
        self.external[side.slot()].len()
    }

    pub fn is_empty(&self) -> bool {
        self.external.iter().all(Vec::is_empty)
    }

    pub fn get(&self, side: Side, id: u64) -> Option<u32> {
        self.internal[side.slot()].get(&id).copied()
    }

    /// Index for `id`, allocating the next dense index when unseen.
    pub fn intern(&mut self, side: Side, id: u64) -> u32 {
        let s = side.slot();
        if let Some(&i) = self.internal[s].get(&id) {
            return i;
        }
        let i = self.external[s].len() as u32;
        self.external[s].push(id);
        self.internal[s].insert(id, i);
        i
    }

    /// External id of `node`; nodes beyond the map fall back to `index + 1`.
    pub fn external(&self, node: NodeRef) -> u64 {
        self.external[node.side.slot()]
            .get(node.index as usize)
            .copied()
            .unwrap_or(node.index as u64 + 1)
    }

    pub fn ids(&self, side: Side) -> &[u64] {
        &self.external[side.slot()]
    }
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: BipartiteGraph,
    pub ids: IdMap,
    /// Number of repeated edge lines that were collapsed.
    pub duplicates: usize,
}

fn lines(text: &[u8]) -> impl Iterator<Item = (usize, &[u8])> {
    text.split(|&b| b == b'\n').enumerate().map(|(i, line)| {
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        (i + 1, line)
    })
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('%') || t.starts_with('#')
}

fn parse_id(field: Option<&str>, line: usize) -> Result<u64, ParseError> {
    let field = field.ok_or_else(|| ParseError {
        line,
        message: "expected two ids".into(),
    })?;
    match field.parse::<u64>() {
        Ok(0) => Err(ParseError {
            line,
            message: "ids are 1-indexed; found 0".into(),
        }),
        Ok(id) => Ok(id),
        Err(_) => Err(ParseError {
            line,
            message: format!("not a positive integer: {field:?}"),
        }),
    }
}

fn utf8(line: &[u8], number: usize) -> Result<&str, ParseError> {
    std::str::from_utf8(line).map_err(|_| ParseError {
        line: number,
        message: "invalid UTF-8".into(),
    })
}

/// Parses an edge list into a fresh graph.
pub fn load_edge_list(text: &[u8]) -> Result<LoadedGraph, ParseError> {
    load_edge_list_with_ids(text, IdMap::new())
}

/// Parses an edge list, resolving ids through `ids` first so that a graph
/// can be reloaded against the node numbering of an existing index.
pub fn load_edge_list_with_ids(text: &[u8], mut ids: IdMap) -> Result<LoadedGraph, ParseError> {
    let mut pairs = Vec::new();
    for (number, raw) in lines(text) {
        let line = utf8(raw, number)?;
        if is_skippable(line) {
            continue;
        }
        // KONECT files may carry weight/timestamp columns after the two ids
        let mut fields = line.split_whitespace();
        let u = parse_id(fields.next(), number)?;
        let v = parse_id(fields.next(), number)?;
        pairs.push((ids.intern(Side::Upper, u), ids.intern(Side::Lower, v)));
    }

    let mut graph = BipartiteGraph::new(ids.len(Side::Upper), ids.len(Side::Lower));
    let mut duplicates = 0;
    for (u, v) in pairs {
        if graph.has_edge(u, v) {
            duplicates += 1;
            continue;
        }
        graph
            .insert_edge(NodeRef::upper(u), NodeRef::lower(v))
            .expect("indices come from the id map");
    }
    Ok(LoadedGraph {
        graph,
        ids,
        duplicates,
    })
}

/// Writes `graph` as an edge list using external ids, edges sorted by index.
pub fn write_edge_list<W: Write>(graph: &BipartiteGraph, ids: &IdMap, mut out: W) -> io::Result<()> {
    writeln!(out, "% bip unweighted")?;
    for (u, v) in graph.edge_pairs() {
        writeln!(
            out,
            "{} {}",
            ids.external(NodeRef::upper(u)),
            ids.external(NodeRef::lower(v))
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOp {
    Insert { u: u64, v: u64 },
    Delete { u: u64, v: u64 },
}

impl UpdateOp {
    pub fn ids(self) -> (u64, u64) {
        match self {
            UpdateOp::Insert { u, v } | UpdateOp::Delete { u, v } => (u, v),
        }
    }

    /// The operation that undoes this one.
    pub fn inverse(self) -> UpdateOp {
        match self {
            UpdateOp::Insert { u, v } => UpdateOp::Delete { u, v },
            UpdateOp::Delete { u, v } => UpdateOp::Insert { u, v },
        }
    }
}

/// Parses an update stream; each op line is `+ u v` or `- u v`.
pub fn parse_update_stream(text: &[u8]) -> Result<Vec<UpdateOp>, ParseError> {
    let mut ops = Vec::new();
    for (number, raw) in lines(text) {
        let line = utf8(raw, number)?;
        if is_skippable(line) {
            continue;
        }
        let mut fields = line.split_whitespace();
        let sign = fields.next().unwrap_or_default();
        let u = parse_id(fields.next(), number)?;
        let v = parse_id(fields.next(), number)?;
        if fields.next().is_some() {
            return Err(ParseError {
                line: number,
                message: "trailing fields after update".into(),
            });
        }
        ops.push(match sign {
            "+" => UpdateOp::Insert { u, v },
            "-" => UpdateOp::Delete { u, v },
            other => {
                return Err(ParseError {
                    line: number,
                    message: format!("expected '+' or '-', found {other:?}"),
                })
            }
        });
    }
    Ok(ops)
}

pub fn write_update_stream<W: Write>(ops: &[UpdateOp], mut out: W) -> io::Result<()> {
    for op in ops {
        match *op {
            UpdateOp::Insert { u, v } => writeln!(out, "+ {u} {v}")?,
            UpdateOp::Delete { u, v } => writeln!(out, "- {u} {v}")?,
        }
    }
    Ok(())
}
