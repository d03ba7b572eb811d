mod common;

use bdindex::oracle::{oracle_rank, OracleLimits};
use bdindex::orientation::{
    balance_orientation, egalitarian_orientation, init_orientation, max_reachable, min_reacher,
    orientation_to_rank, reverse_path, verify_egalitarian, warm_orientation, Orientation,
};
use bdindex::{BipartiteGraph, NodeRef, Side};
use proptest::prelude::*;
use rand::Rng;

fn recount(g: &BipartiteGraph, o: &Orientation) -> [Vec<u32>; 2] {
    let mut d = [vec![0u32; g.upper_count()], vec![0u32; g.lower_count()]];
    for (e, u, v) in g.edges() {
        match o.head_side(e) {
            Side::Upper => d[0][u as usize] += 1,
            Side::Lower => d[1][v as usize] += 1,
        }
    }
    d
}

#[test]
fn init_honors_caps_by_recount() {
    let mut r = common::rng(12);
    let g = common::random_graph(&mut r, 5, 5, 12);
    for capped in Side::BOTH {
        let o = init_orientation(&g, 2, capped);
        let d = recount(&g, &o);
        for x in g.all_nodes() {
            assert_eq!(d[x.side as usize][x.index as usize], o.indegree(x));
            if x.side == capped {
                assert_eq!(o.indegree(x) as usize, g.degree(x).min(2));
            }
        }
        assert_eq!(d.iter().flatten().sum::<u32>() as usize, g.edge_count());
    }
}

/// Smallest `Σ indegree²` over the uncapped side among all orientations
/// honoring the capped-side condition.
fn best_potential(g: &BipartiteGraph, level: u32, capped: Side) -> u64 {
    let edges = g.edge_pairs();
    let mut best = u64::MAX;
    for mask in 0u32..(1 << edges.len()) {
        let mut d = [vec![0u32; g.upper_count()], vec![0u32; g.lower_count()]];
        for (bit, &(u, v)) in edges.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                d[0][u as usize] += 1;
            } else {
                d[1][v as usize] += 1;
            }
        }
        let c = capped as usize;
        let ok = g
            .nodes(capped)
            .all(|x| d[c][x.index as usize] as usize == g.degree(x).min(level as usize));
        if ok {
            best = best.min(d[1 - c].iter().map(|&x| (x as u64) * (x as u64)).sum());
        }
    }
    best
}

#[test]
fn balanced_potential_is_minimal() {
    let mut r = common::rng(1414);
    for _ in 0..5 {
        let g = common::random_graph(&mut r, 5, 6, 14);
        for capped in Side::BOTH {
            let mut o = init_orientation(&g, 1, capped);
            let stats = balance_orientation(&g, &mut o).unwrap();
            verify_egalitarian(&g, &o).unwrap();
            assert_eq!(o.potential(), best_potential(&g, 1, capped));
            assert_eq!(stats.potential_after, o.potential());
        }
    }
}

#[test]
fn every_reversal_lowers_the_potential() {
    let mut r = common::rng(21);
    for _ in 0..20 {
        let g = common::skewed_graph(&mut r, 60, 60, 400);
        for level in [0, 1, 3] {
            let mut o = init_orientation(&g, level, Side::Upper);
            let s = balance_orientation(&g, &mut o).unwrap();
            assert!(s.potential_before >= s.potential_after + 2 * s.reversals);
        }
    }
}

#[test]
fn ranks_match_oracle() {
    let lim = OracleLimits::default();
    let mut r = common::rng(1212);
    for _ in 0..30 {
        let g = common::random_graph(&mut r, 5, 5, 12);
        for capped in Side::BOTH {
            for level in 0..=3 {
                let t = orientation_to_rank(&g, &egalitarian_orientation(&g, level, capped));
                assert_eq!(t, oracle_rank(&g, level, capped, &lim).unwrap(), "{:?}", g.edge_pairs());
            }
        }
    }
}

#[test]
fn warm_start_reaches_the_same_ranks() {
    let mut r = common::rng(33);
    for _ in 0..10 {
        let g = common::skewed_graph(&mut r, 80, 70, 600);
        for capped in Side::BOTH {
            for level in [0, 2, 5] {
                let mut cold = init_orientation(&g, level, capped);
                balance_orientation(&g, &mut cold).unwrap();
                let mut warm = warm_orientation(&g, level, capped);
                balance_orientation(&g, &mut warm).unwrap();
                verify_egalitarian(&g, &warm).unwrap();
                assert_eq!(cold.potential(), warm.potential());
                assert_eq!(orientation_to_rank(&g, &cold), orientation_to_rank(&g, &warm));
            }
        }
    }
}

/// `reach[i][j]`: node `i` has a directed path to node `j` (or `i == j`).
fn closure(g: &BipartiteGraph, o: &Orientation) -> (Vec<NodeRef>, Vec<Vec<bool>>) {
    let nodes: Vec<NodeRef> = g.all_nodes().collect();
    let n = nodes.len();
    let pos = |x: NodeRef| nodes.iter().position(|&y| y == x).unwrap();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for (e, u, v) in g.edges() {
        let (a, b) = (NodeRef::upper(u), NodeRef::lower(v));
        let (from, to) = if o.points_into(e, b) { (a, b) } else { (b, a) };
        reach[pos(from)][pos(to)] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                let via = reach[k].clone();
                for (cell, hop) in reach[i].iter_mut().zip(via) {
                    *cell |= hop;
                }
            }
        }
    }
    (nodes, reach)
}

fn assert_path(g: &BipartiteGraph, o: &Orientation, nodes: &[NodeRef], from: NodeRef, to: NodeRef) {
    assert_eq!(nodes.first(), Some(&from));
    assert_eq!(nodes.last(), Some(&to));
    for w in nodes.windows(2) {
        let e = g.edge_between(w[0], w[1]).unwrap();
        assert!(o.points_into(e, w[1]));
    }
}

#[test]
fn searches_agree_with_closure() {
    let mut r = common::rng(44);
    for _ in 0..30 {
        let g = common::random_graph(&mut r, 6, 6, 16);
        let capped = if r.gen_bool(0.5) { Side::Upper } else { Side::Lower };
        let o = egalitarian_orientation(&g, r.gen_range(0..3), capped);
        let free = o.uncapped_side();
        let (nodes, reach) = closure(&g, &o);
        for (j, &x) in nodes.iter().enumerate() {
            let reachers: Vec<NodeRef> = (0..nodes.len())
                .filter(|&i| i != j && reach[i][j] && nodes[i].side == free)
                .map(|i| nodes[i])
                .collect();
            let want = reachers.iter().min_by_key(|y| (o.indegree(**y), y.index)).copied();
            let got = min_reacher(&g, &o, x);
            assert_eq!(got.as_ref().map(|h| h.node), want, "min reacher of {x}");
            if let Some(h) = got {
                assert_path(&g, &o, &h.nodes, h.node, x);
            }
            for include_self in [false, true] {
                let targets: Vec<NodeRef> = (0..nodes.len())
                    .filter(|&i| (i != j || include_self) && reach[j][i] && nodes[i].side == free)
                    .map(|i| nodes[i])
                    .collect();
                let want = targets
                    .iter()
                    .min_by_key(|y| (std::cmp::Reverse(o.indegree(**y)), y.index))
                    .copied();
                let got = max_reachable(&g, &o, x, include_self);
                assert_eq!(got.as_ref().map(|h| h.node), want, "max reachable from {x}");
                if let Some(h) = got {
                    assert_path(&g, &o, &h.nodes, x, h.node);
                }
            }
        }
    }
}

#[test]
fn reversing_random_paths_moves_one_unit() {
    let mut r = common::rng(55);
    let g = common::random_graph(&mut r, 30, 30, 200);
    let mut o = egalitarian_orientation(&g, 2, Side::Upper);
    for _ in 0..200 {
        let start = NodeRef::lower(r.gen_range(0..30));
        let Some(h) = max_reachable(&g, &o, start, false) else { continue };
        let before: Vec<u32> = g.all_nodes().map(|x| o.indegree(x)).collect();
        reverse_path(&g, &mut o, &h.nodes).unwrap();
        for (x, old) in g.all_nodes().zip(before) {
            let expected = if x == start {
                old + 1
            } else if x == h.node {
                old - 1
            } else {
                old
            };
            assert_eq!(o.indegree(x), expected, "{x}");
        }
        let total: u32 = g.all_nodes().map(|x| o.indegree(x)).sum();
        assert_eq!(total as usize, g.edge_count());
        assert_eq!(recount(&g, &o)[1], o.indegrees(Side::Lower));
    }
}

#[test]
fn non_paths_are_rejected() {
    let g = BipartiteGraph::from_edges([(0, 0), (1, 1)]).unwrap();
    let mut o = init_orientation(&g, 0, Side::Upper);
    assert!(reverse_path(&g, &mut o, &[NodeRef::upper(0)]).is_err());
    assert!(reverse_path(&g, &mut o, &[NodeRef::upper(0), NodeRef::lower(1)]).is_err());
    // the edge points into the lower node, so walking it backwards fails
    assert!(reverse_path(&g, &mut o, &[NodeRef::lower(0), NodeRef::upper(0)]).is_err());
    assert!(reverse_path(&g, &mut o, &[NodeRef::upper(0), NodeRef::lower(0)]).is_ok());
}

fn small_graph() -> impl Strategy<Value = BipartiteGraph> {
    (1u32..9, 1u32..9, prop::collection::vec((0u32..9, 0u32..9), 0..45)).prop_map(|(nu, nv, pairs)| {
        let mut g = BipartiteGraph::new(nu as usize, nv as usize);
        for (a, b) in pairs {
            let (a, b) = (a % nu, b % nv);
            if !g.has_edge(a, b) {
                g.insert_edge(NodeRef::upper(a), NodeRef::lower(b)).unwrap();
            }
        }
        g
    })
}

proptest! {
    #[test]
    fn rank_and_indegree_relations(g in small_graph(), level in 0u32..4, upper in any::<bool>()) {
        let capped = if upper { Side::Upper } else { Side::Lower };
        let o = egalitarian_orientation(&g, level, capped);
        prop_assert!(verify_egalitarian(&g, &o).is_ok());
        let t = orientation_to_rank(&g, &o);
        for x in g.nodes(capped.other()) {
            let (d, r) = (o.indegree(x) as i32, t.rank(x));
            prop_assert!(d == r || d == r + 1, "{x}: indegree {d}, rank {r}");
        }
        for (e, u, v) in g.edges() {
            let (a, b) = (NodeRef::upper(u), NodeRef::lower(v));
            if t.rank(a) > t.rank(b) {
                prop_assert!(o.points_into(e, b));
            } else if t.rank(b) > t.rank(a) {
                prop_assert!(o.points_into(e, a));
            }
        }
    }
}
