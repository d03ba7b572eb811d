//! Brute-force ground truth for tiny graphs.
//!
//! Everything here is deliberately naive: dense subgraphs come from trying
//! every orientation, ranks and `p` from linear scans, and the density
//! properties from enumerating node subsets. Nothing is shared with the
//! flow or orientation code.

use std::collections::VecDeque;

use crate::error::OracleError;
use crate::graph::{BipartiteGraph, NodeRef, Side};
use crate::orientation::RankTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_edges: usize,
    pub max_nodes: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_edges: 16,
            max_nodes: 14,
        }
    }
}

impl OracleLimits {
    fn check_edges(&self, graph: &BipartiteGraph) -> Result<(), OracleError> {
        if graph.edge_count() > self.max_edges {
            return Err(OracleError::LimitExceeded {
                what: "edges",
                actual: graph.edge_count(),
                limit: self.max_edges,
            });
        }
        Ok(())
    }

    fn check_nodes(&self, graph: &BipartiteGraph) -> Result<(), OracleError> {
        if graph.node_count() > self.max_nodes {
            return Err(OracleError::LimitExceeded {
                what: "nodes",
                actual: graph.node_count(),
                limit: self.max_nodes,
            });
        }
        Ok(())
    }
}

/// Nodes numbered `0..n` with upper nodes first.
fn flat(graph: &BipartiteGraph, node: NodeRef) -> usize {
    match node.side {
        Side::Upper => node.index as usize,
        Side::Lower => graph.upper_count() + node.index as usize,
    }
}

fn unflat(graph: &BipartiteGraph, i: usize) -> NodeRef {
    if i < graph.upper_count() {
        NodeRef::upper(i as u32)
    } else {
        NodeRef::lower((i - graph.upper_count()) as u32)
    }
}

/// Plain BFS over `arcs` (pairs `from -> to`) from every seed.
fn closure(n: usize, arcs: &[(usize, usize)], seeds: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in seeds {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &(a, b) in arcs {
            if a == x && !seen[b] {
                seen[b] = true;
                queue.push_back(b);
            }
        }
    }
    seen
}

/// `D(α, β)` by trying all `2^|E|` orientations.
///
/// Every orientation without a path from an under-cap node to an over-cap
/// node must induce the same set; disagreement is reported as an error.
pub fn oracle_dense(
    graph: &BipartiteGraph,
    alpha: u32,
    beta: u32,
    limits: &OracleLimits,
) -> Result<Vec<NodeRef>, OracleError> {
    limits.check_edges(graph)?;
    let n = graph.node_count();
    let edges: Vec<(usize, usize)> = graph
        .edge_pairs()
        .into_iter()
        .map(|(u, v)| (flat(graph, NodeRef::upper(u)), flat(graph, NodeRef::lower(v))))
        .collect();
    let cap: Vec<u32> = (0..n)
        .map(|i| if i < graph.upper_count() { alpha } else { beta })
        .collect();

    let mut answer: Option<Vec<bool>> = None;
    let mut arcs = Vec::with_capacity(edges.len());
    let mut reversed = Vec::with_capacity(edges.len());
    for mask in 0u64..(1u64 << edges.len()) {
        arcs.clear();
        reversed.clear();
        let mut indegree = vec![0u32; n];
        for (bit, &(u, v)) in edges.iter().enumerate() {
            // bit set: edge points into its upper endpoint
            let (from, to) = if mask >> bit & 1 == 1 { (v, u) } else { (u, v) };
            indegree[to] += 1;
            arcs.push((from, to));
            reversed.push((to, from));
        }
        let under: Vec<usize> = (0..n).filter(|&i| indegree[i] < cap[i]).collect();
        let over: Vec<usize> = (0..n).filter(|&i| indegree[i] > cap[i]).collect();
        let from_under = closure(n, &arcs, &under);
        if over.iter().any(|&t| from_under[t]) {
            continue;
        }
        let dense = closure(n, &reversed, &over);
        match &answer {
            None => answer = Some(dense),
            Some(prev) if *prev != dense => {
                return Err(OracleError::ModelViolation { alpha, beta });
            }
            Some(_) => {}
        }
    }
    let answer = answer.unwrap_or_else(|| vec![false; n]);
    Ok((0..n).filter(|&i| answer[i]).map(|i| unflat(graph, i)).collect())
}

/// Ranks at `level` by scanning the free parameter upward.
pub fn oracle_rank(
    graph: &BipartiteGraph,
    level: u32,
    capped: Side,
    limits: &OracleLimits,
) -> Result<RankTable, OracleError> {
    let mut table = RankTable::unranked(level, capped, graph.upper_count(), graph.lower_count());
    let mut k = 0u32;
    loop {
        let d = match capped {
            Side::Upper => oracle_dense(graph, level, k, limits)?,
            Side::Lower => oracle_dense(graph, k, level, limits)?,
        };
        if d.is_empty() {
            return Ok(table);
        }
        for x in d {
            table.set(x, k as i32);
        }
        k += 1;
    }
}

/// Largest `k` with `D(k, k)` nonempty, scanning upward; `-1` if none.
pub fn oracle_p(graph: &BipartiteGraph, limits: &OracleLimits) -> Result<i64, OracleError> {
    let mut k = 0u32;
    while !oracle_dense(graph, k, k, limits)?.is_empty() {
        k += 1;
    }
    Ok(k as i64 - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Theorem1Violation {
    /// Removing `subset` from the dense part loses too few edges.
    Inside { subset: Vec<NodeRef>, edges: usize, bound: u64 },
    /// Adding `subset` to the dense part gains too many edges.
    Outside { subset: Vec<NodeRef>, edges: usize, bound: u64 },
}

/// Exhaustive check of the two density properties of `dense`.
///
/// Inside: every nonempty `X ⊆ D` is incident to more than
/// `α·|X∩U| + β·|X∩V|` edges of `G[D]`. Outside: every `Y` disjoint from
/// `D` adds at most `α·|Y∩U| + β·|Y∩V|` edges to `G[D]`.
pub fn verify_theorem1(
    graph: &BipartiteGraph,
    dense: &[NodeRef],
    alpha: u32,
    beta: u32,
    limits: &OracleLimits,
) -> Result<Option<Theorem1Violation>, OracleError> {
    limits.check_nodes(graph)?;
    let n = graph.node_count();
    let edges: Vec<(usize, usize)> = graph
        .edge_pairs()
        .into_iter()
        .map(|(u, v)| (flat(graph, NodeRef::upper(u)), flat(graph, NodeRef::lower(v))))
        .collect();
    let mut in_d = vec![false; n];
    for &x in dense {
        in_d[flat(graph, x)] = true;
    }
    let inside: Vec<usize> = (0..n).filter(|&i| in_d[i]).collect();
    let outside: Vec<usize> = (0..n).filter(|&i| !in_d[i]).collect();
    let weight = |i: usize| -> u64 {
        if i < graph.upper_count() {
            alpha as u64
        } else {
            beta as u64
        }
    };
    let pick = |pool: &[usize], mask: u64| -> Vec<bool> {
        let mut chosen = vec![false; n];
        for (bit, &i) in pool.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                chosen[i] = true;
            }
        }
        chosen
    };
    let nodes_of = |chosen: &[bool]| -> Vec<NodeRef> {
        (0..n).filter(|&i| chosen[i]).map(|i| unflat(graph, i)).collect()
    };

    for mask in 1u64..(1u64 << inside.len()) {
        let x = pick(&inside, mask);
        let lost = edges
            .iter()
            .filter(|&&(a, b)| in_d[a] && in_d[b] && (x[a] || x[b]))
            .count();
        let bound: u64 = (0..n).filter(|&i| x[i]).map(weight).sum();
        if lost as u64 <= bound {
            return Ok(Some(Theorem1Violation::Inside {
                subset: nodes_of(&x),
                edges: lost,
                bound,
            }));
        }
    }
    for mask in 1u64..(1u64 << outside.len()) {
        let y = pick(&outside, mask);
        let gained = edges
            .iter()
            .filter(|&&(a, b)| (in_d[a] || y[a]) && (in_d[b] || y[b]) && (y[a] || y[b]))
            .count();
        let bound: u64 = (0..n).filter(|&i| y[i]).map(weight).sum();
        if gained as u64 > bound {
            return Ok(Some(Theorem1Violation::Outside {
                subset: nodes_of(&y),
                edges: gained,
                bound,
            }));
        }
    }
    Ok(None)
}
