#![allow(dead_code)]

use bdindex::{BipartiteGraph, NodeRef};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random bipartite graph with exactly `edges` distinct edges
/// (capped at `nu * nv`).
pub fn random_graph(r: &mut ChaCha8Rng, nu: u32, nv: u32, edges: usize) -> BipartiteGraph {
    let mut all: Vec<(u32, u32)> = (0..nu).flat_map(|a| (0..nv).map(move |b| (a, b))).collect();
    all.shuffle(r);
    all.truncate(edges.min(all.len()));
    let mut g = BipartiteGraph::new(nu as usize, nv as usize);
    for (a, b) in all {
        g.insert_edge(NodeRef::upper(a), NodeRef::lower(b)).unwrap();
    }
    g
}

/// Small graph for oracle sweeps: `|U|, |V| ≤ 4`, `|E| ≤ 12`.
pub fn tiny_graph(r: &mut ChaCha8Rng) -> BipartiteGraph {
    let nu = r.gen_range(1..=4);
    let nv = r.gen_range(1..=4);
    let m = r.gen_range(0..=(nu * nv).min(12)) as usize;
    random_graph(r, nu, nv, m)
}

/// Sparse graph with skewed degrees, built by sampling endpoints from a
/// few hubs more often than the rest.
pub fn skewed_graph(r: &mut ChaCha8Rng, nu: u32, nv: u32, edges: usize) -> BipartiteGraph {
    let mut g = BipartiteGraph::new(nu as usize, nv as usize);
    let target = edges.min((nu as usize) * (nv as usize) / 2);
    while g.edge_count() < target {
        let a = skewed(r, nu);
        let b = skewed(r, nv);
        if !g.has_edge(a, b) {
            g.insert_edge(NodeRef::upper(a), NodeRef::lower(b)).unwrap();
        }
    }
    g
}

fn skewed(r: &mut ChaCha8Rng, n: u32) -> u32 {
    let x: f64 = r.gen();
    ((x * x * x) * n as f64) as u32 % n
}

pub fn sorted(mut v: Vec<NodeRef>) -> Vec<NodeRef> {
    v.sort();
    v
}
