//! Acceptance gate. Prints one line per criterion and exits non-zero when a
//! gating criterion fails. Criterion 9 is a trend check and never gates.

mod common;

use std::time::{Duration, Instant};

use bdindex::index::serialize;
use bdindex::maintenance::check_locality;
use bdindex::oracle::{oracle_dense, oracle_p, oracle_rank, verify_theorem1, OracleLimits};
use bdindex::orientation::{balance_orientation, init_orientation, orientation_to_rank, verify_egalitarian};
use bdindex::{
    build_index, compute_dense_subgraph, compute_p, BdIndex, BipartiteGraph, DynamicIndex, LevelPair,
    MaintenanceMode, NodeRef, Side,
};
use rand::seq::IteratorRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn from(failure: Option<String>, detail: String) -> Self {
        match failure {
            None => Outcome { pass: true, detail },
            Some(f) => Outcome {
                pass: false,
                detail: format!("{detail}; first failure: {f}"),
            },
        }
    }
}

/// Every index built during the run, for the space and `p` checks.
#[derive(Default)]
struct Ledger {
    graphs: usize,
    space_failure: Option<String>,
    v_below_edges: usize,
    p_failure: Option<String>,
}

impl Ledger {
    fn record(&mut self, g: &BipartiteGraph, idx: &BdIndex) {
        self.graphs += 1;
        let m = g.edge_count();
        let s = idx.stats();
        let checks = [
            (s.upper_entries >= m, "U entries >= |E|"),
            (s.upper_entries <= 2 * m, "U entries <= 2|E|"),
            (s.upper_cursors <= m, "U cursors <= |E|"),
            (s.lower_entries <= 2 * m, "V entries <= 2|E|"),
            (s.lower_cursors <= m, "V cursors <= |E|"),
            (s.model_bytes <= 32 * m, "model bytes <= 32|E|"),
        ];
        for (ok, what) in checks {
            if !ok && self.space_failure.is_none() {
                self.space_failure = Some(format!("{what} with |E| = {m}, stats {s:?}"));
            }
        }
        if s.lower_entries < m {
            self.v_below_edges += 1;
        }
        let bound = ((m as f64).sqrt() / 2.0).floor() as i64;
        if m > 0 && idx.p() > bound && self.p_failure.is_none() {
            self.p_failure = Some(format!("p = {} > {bound} with |E| = {m}", idx.p()));
        }
    }
}

fn max_rank(idx: &BdIndex) -> i32 {
    Side::BOTH
        .iter()
        .flat_map(|&s| idx.rows(s))
        .filter_map(|r| r.ranks().last().copied())
        .max()
        .unwrap_or(-1)
}

fn sorted(v: &[NodeRef]) -> Vec<NodeRef> {
    common::sorted(v.to_vec())
}

fn tiny_corpus() -> Vec<BipartiteGraph> {
    let mut r = common::rng(101);
    (0..200).map(|_| common::tiny_graph(&mut r)).collect()
}

fn criterion_1(corpus: &[BipartiteGraph]) -> Outcome {
    let lim = OracleLimits::default();
    let start = Instant::now();
    let mut failure = None;
    'outer: for (gi, g) in corpus.iter().enumerate() {
        for a in 0..=3 {
            for b in 0..=3 {
                let flow = compute_dense_subgraph(g, LevelPair::new(a, b));
                match oracle_dense(g, a, b, &lim) {
                    Ok(o) if o == flow => {}
                    Ok(o) => {
                        failure = Some(format!("graph {gi} ({a},{b}): flow {flow:?} oracle {o:?}"));
                        break 'outer;
                    }
                    Err(e) => {
                        failure = Some(format!("graph {gi}: {e}"));
                        break 'outer;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if failure.is_none() && elapsed > Duration::from_secs(120) {
        failure = Some(format!("took {elapsed:?}, limit 120 s"));
    }
    Outcome::from(
        failure,
        format!("{} graphs x 16 level pairs, exact set equality, {elapsed:.2?}", corpus.len()),
    )
}

fn criterion_2(corpus: &[BipartiteGraph]) -> Outcome {
    let lim = OracleLimits::default();
    let mut checked = 0;
    let mut failure = None;
    'outer: for (gi, g) in corpus.iter().enumerate() {
        let p = match oracle_p(g, &lim) {
            Ok(p) => p,
            Err(e) => {
                failure = Some(format!("graph {gi}: {e}"));
                break;
            }
        };
        for side in Side::BOTH {
            for k in 0..=p.max(0) as u32 {
                let mut o = init_orientation(g, k, side);
                if let Err(e) = balance_orientation(g, &mut o) {
                    failure = Some(format!("graph {gi} {side:?} level {k}: {e}"));
                    break 'outer;
                }
                let ranks = orientation_to_rank(g, &o);
                match oracle_rank(g, k, side, &lim) {
                    Ok(t) if t == ranks => checked += 1,
                    Ok(_) => {
                        failure = Some(format!("graph {gi} {side:?} level {k}: ranks differ"));
                        break 'outer;
                    }
                    Err(e) => {
                        failure = Some(format!("graph {gi}: {e}"));
                        break 'outer;
                    }
                }
            }
        }
    }
    Outcome::from(failure, format!("{checked} rank tables, exact"))
}

fn criterion_3(ledger: &mut Ledger) -> Outcome {
    let mut r = common::rng(303);
    let start = Instant::now();
    let mut queries = 0usize;
    let mut failure = None;
    'outer: for i in 0..20u32 {
        let m = 250 * (i as usize + 1);
        let g = if i % 2 == 0 {
            common::random_graph(&mut r, 150, 120, m)
        } else {
            common::skewed_graph(&mut r, 300, 250, m)
        };
        let (idx, _) = build_index(&g);
        ledger.record(&g, &idx);
        let (p, rmax) = (idx.p(), max_rank(&idx));
        for a in 0..=(p + 2).max(0) as u32 {
            for b in 0..=(rmax + 2).max(0) as u32 {
                for (x, y) in [(a, b), (b, a)] {
                    queries += 1;
                    let want = compute_dense_subgraph(&g, LevelPair::new(x, y));
                    if sorted(idx.query(x, y)) != want {
                        failure = Some(format!("graph {i} (|E| = {m}) query ({x},{y})"));
                        break 'outer;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if failure.is_none() && elapsed > Duration::from_secs(300) {
        failure = Some(format!("took {elapsed:?}, limit 300 s"));
    }
    Outcome::from(
        failure,
        format!("20 graphs up to 5000 edges, {queries} queries, exact, {elapsed:.2?}"),
    )
}

fn theorem1_graph(r: &mut ChaCha8Rng) -> BipartiteGraph {
    let nu = r.gen_range(1..=6u32);
    let nv = r.gen_range(1..=(12 - nu).min(6));
    let m = r.gen_range(0..=(nu * nv) as usize);
    common::random_graph(r, nu, nv, m)
}

fn criterion_4() -> Outcome {
    let lim = OracleLimits::default();
    let mut r = common::rng(404);
    let mut pairs = 0;
    let mut failure = None;
    'outer: for gi in 0..50 {
        let g = theorem1_graph(&mut r);
        let top = g.all_nodes().map(|x| g.degree(x)).max().unwrap_or(0) as u32;
        for a in 0..=top {
            for b in 0..=top {
                let d = compute_dense_subgraph(&g, LevelPair::new(a, b));
                if d.is_empty() {
                    continue;
                }
                pairs += 1;
                match verify_theorem1(&g, &d, a, b, &lim) {
                    Ok(None) => {}
                    Ok(Some(v)) => {
                        failure = Some(format!("graph {gi} ({a},{b}): {v:?}"));
                        break 'outer;
                    }
                    Err(e) => {
                        failure = Some(format!("graph {gi}: {e}"));
                        break 'outer;
                    }
                }
            }
        }
    }
    Outcome::from(failure, format!("50 graphs, {pairs} nonempty level pairs, zero violations"))
}

fn criterion_5(ledger: &Ledger) -> Outcome {
    Outcome::from(
        ledger.space_failure.clone(),
        format!(
            "{} indexes: |E| <= U entries <= 2|E|, U cursors <= |E|, V entries <= 2|E|, V cursors <= |E|, \
             model bytes <= 32|E|; V entries < |E| on {} of them (lower bound not asserted for V)",
            ledger.graphs, ledger.v_below_edges
        ),
    )
}

fn snapshot(d: &DynamicIndex) -> [Vec<bdindex::RankTable>; 2] {
    [d.tables(Side::Upper).to_vec(), d.tables(Side::Lower).to_vec()]
}

fn locality(before: &[Vec<bdindex::RankTable>; 2], d: &DynamicIndex, report: &bdindex::maintenance::UpdateReport) -> Result<(), String> {
    for b in &report.boundaries {
        let s = if b.capped == Side::Upper { 0 } else { 1 };
        let k = b.level as usize;
        if let (Some(old), Some(new)) = (before[s].get(k), d.tables(b.capped).get(k)) {
            check_locality(old, new, b)?;
        }
    }
    Ok(())
}

/// Criteria 6 and 7 share the same replays.
fn criteria_6_7(ledger: &mut Ledger) -> (Outcome, Outcome) {
    let mut r = common::rng(606);
    let mut truth = None;
    let mut same = None;
    let mut updates = 0;
    'outer: for gi in 0..10u32 {
        let (nu, nv) = (60 + 4 * gi, 50 + 3 * gi);
        let m = 200 * (gi as usize + 1);
        let g = if gi % 2 == 0 {
            common::random_graph(&mut r, nu, nv, m)
        } else {
            common::skewed_graph(&mut r, nu, nv, m)
        };
        let mut s = DynamicIndex::new(g.clone(), MaintenanceMode::SpaceEfficient);
        let mut t = DynamicIndex::new(g, MaintenanceMode::TimeEfficient);
        for step in 0..100 {
            let delete = s.graph().edge_count() > 0 && r.gen_bool(0.5);
            let (a, b) = if delete {
                let (_, a, b) = s.graph().edges().choose(&mut r).unwrap();
                (NodeRef::upper(a), NodeRef::lower(b))
            } else {
                loop {
                    let a = NodeRef::upper(r.gen_range(0..nu + 2));
                    let b = NodeRef::lower(r.gen_range(0..nv + 2));
                    let g = s.graph();
                    if !(g.contains_node(a) && g.contains_node(b) && g.has_edge(a.index, b.index)) {
                        break (a, b);
                    }
                }
            };
            let where_ = format!("graph {gi} step {step} {} ({a},{b})", if delete { "delete" } else { "insert" });
            let (bs, bt) = (snapshot(&s), snapshot(&t));
            let (rs, rt) = if delete { (s.delete(a, b), t.delete(a, b)) } else { (s.insert(a, b), t.insert(a, b)) };
            updates += 1;
            let (rs, rt) = match (rs, rt) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(e), _) | (_, Err(e)) => {
                    truth = Some(format!("{where_}: {e}"));
                    break 'outer;
                }
            };
            let (fresh, _) = build_index(s.graph());
            ledger.record(s.graph(), &fresh);
            let problem = if s.index() != &fresh {
                Some("S-mode index differs from rebuild".to_string())
            } else if t.index() != &fresh {
                Some("T-mode index differs from rebuild".to_string())
            } else if let Err(e) = locality(&bs, &s, &rs).and_then(|_| locality(&bt, &t, &rt)) {
                Some(e)
            } else {
                let set = t.orientations().unwrap();
                set.upper
                    .iter()
                    .chain(&set.lower)
                    .find_map(|o| verify_egalitarian(t.graph(), o).err())
                    .map(|e| format!("orientation not egalitarian: {e:?}"))
            };
            if let Some(p) = problem {
                truth = Some(format!("{where_}: {p}"));
                break 'outer;
            }
            if same.is_none() && serialize(s.index(), None) != serialize(t.index(), None) {
                same = Some(where_);
            }
        }
    }
    (
        Outcome::from(
            truth,
            format!("10 graphs up to 2000 edges, {updates} updates, both modes == rebuild, egalitarian, local moves"),
        ),
        Outcome::from(same, format!("{updates} updates, serialized indexes byte-identical")),
    )
}

fn criterion_8(ledger: &mut Ledger) -> Outcome {
    let mut r = common::rng(808);
    let g = common::skewed_graph(&mut r, 30_000, 30_000, 100_000);
    let (idx, _) = build_index(&g);
    ledger.record(&g, &idx);
    let top = (max_rank(&idx) + 2).max(0) as u32;
    let mut failure = None;
    let mut worst = 0;
    for i in 0..10_000 {
        let (a, b) = (r.gen_range(0..=top), r.gen_range(0..=top));
        let (nodes, cost) = idx.query_counted(a, b);
        worst = worst.max(cost.range_checks);
        if cost.entries != nodes.len() || cost.range_checks > 2 {
            failure = Some(format!("query ({a},{b}): {} results, cost {cost:?}", nodes.len()));
            break;
        }
        if i % 500 == 0 && sorted(nodes) != compute_dense_subgraph(&g, LevelPair::new(a, b)) {
            failure = Some(format!("query ({a},{b}) disagrees with the flow"));
            break;
        }
    }
    Outcome::from(
        failure,
        format!("10^4 queries on |E| = {}, entries == |result|, range checks <= 2 (max {worst})", g.edge_count()),
    )
}

fn mean(total: Duration, n: u32) -> Duration {
    total / n.max(1)
}

fn criterion_9(ledger: &mut Ledger) -> Outcome {
    let mut r = common::rng(909);
    let g = common::skewed_graph(&mut r, 150_000, 150_000, 1_000_000);
    let t0 = Instant::now();
    let mut t = DynamicIndex::new(g.clone(), MaintenanceMode::TimeEfficient);
    let build = t0.elapsed();
    ledger.record(&g, t.index());
    let mut s = DynamicIndex::from_index(g.clone(), t.index().clone());
    let p = t.index().p().max(0) as u32;

    let queries: Vec<(u32, u32)> = (0..100).map(|_| (r.gen_range(0..=p), r.gen_range(0..=p))).collect();
    let t0 = Instant::now();
    let mut sizes = 0;
    for &(a, b) in &queries {
        sizes += compute_dense_subgraph(&g, LevelPair::new(a, b)).len();
    }
    let online = mean(t0.elapsed(), 100);
    let t0 = Instant::now();
    let mut indexed_sizes = 0;
    for &(a, b) in &queries {
        indexed_sizes += t.index().query(a, b).to_vec().len();
    }
    let indexed = mean(t0.elapsed(), 100);

    let picked: Vec<(NodeRef, NodeRef)> = g
        .edges()
        .choose_multiple(&mut r, 10)
        .into_iter()
        .map(|(_, a, b)| (NodeRef::upper(a), NodeRef::lower(b)))
        .collect();
    let mut failure = None;
    let timed = |d: &mut DynamicIndex| -> Result<Duration, String> {
        let t0 = Instant::now();
        for &(a, b) in &picked {
            d.delete(a, b).map_err(|e| e.to_string())?;
        }
        for &(a, b) in picked.iter().rev() {
            d.insert(a, b).map_err(|e| e.to_string())?;
        }
        Ok(mean(t0.elapsed(), 20))
    };
    let (s_mean, t_mean) = match (timed(&mut s), timed(&mut t)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return Outcome::from(Some(e), "updates failed".into()),
    };
    if s.index() != t.index() {
        failure = Some("S and T indexes diverged".to_string());
    }
    let query_ratio = online.as_secs_f64() / indexed.as_secs_f64().max(1e-9);
    let update_ratio = s_mean.as_secs_f64() / t_mean.as_secs_f64().max(1e-9);
    if sizes != indexed_sizes {
        failure.get_or_insert_with(|| "indexed and online result sizes differ".to_string());
    }
    if query_ratio < 100.0 {
        failure.get_or_insert_with(|| format!("query speedup {query_ratio:.1}x < 100x"));
    }
    if update_ratio < 5.0 {
        failure.get_or_insert_with(|| format!("update speedup {update_ratio:.1}x < 5x"));
    }
    Outcome::from(
        failure,
        format!(
            "|E| = {}, p = {}, build {build:.2?}; query online {online:.2?} vs indexed {indexed:.2?} ({query_ratio:.0}x, need 100x); \
             update S {s_mean:.2?} vs T {t_mean:.2?} ({update_ratio:.1}x, need 5x)",
            g.edge_count(),
            t.index().p()
        ),
    )
}

fn criterion_10(corpus: &[BipartiteGraph], ledger: &mut Ledger) -> Outcome {
    let lim = OracleLimits::default();
    let mut failure = None;
    for (gi, g) in corpus.iter().enumerate() {
        let (idx, _) = build_index(g);
        ledger.record(g, &idx);
        match oracle_p(g, &lim) {
            Ok(p) if p == compute_p(g) && p == idx.p() => {}
            Ok(p) => {
                failure = Some(format!("graph {gi}: oracle p {p}, compute_p {}", compute_p(g)));
                break;
            }
            Err(e) => {
                failure = Some(format!("graph {gi}: {e}"));
                break;
            }
        }
    }
    let failure = failure.or_else(|| ledger.p_failure.clone());
    Outcome::from(
        failure,
        format!("{} oracle graphs exact; p <= floor(sqrt(|E|)/2) on {} indexes", corpus.len(), ledger.graphs),
    )
}

fn main() {
    let corpus = tiny_corpus();
    let mut ledger = Ledger::default();
    let mut results: Vec<(u32, &str, bool, Outcome)> = Vec::new();
    let mut run = |n: u32, name: &'static str, gating: bool, o: Outcome| {
        println!("  criterion {n} finished: {}", if o.pass { "pass" } else { "fail" });
        results.push((n, name, gating, o));
    };
    run(1, "oracle equivalence", true, criterion_1(&corpus));
    run(2, "rank equivalence", true, criterion_2(&corpus));
    run(3, "index/query equivalence", true, criterion_3(&mut ledger));
    run(4, "density properties", true, criterion_4());
    let (c6, c7) = criteria_6_7(&mut ledger);
    run(6, "maintenance ground truth", true, c6);
    run(7, "mode equivalence", true, c7);
    run(8, "query cost", true, criterion_8(&mut ledger));
    run(9, "relative performance (non-gating)", false, criterion_9(&mut ledger));
    run(10, "p sanity", true, criterion_10(&corpus, &mut ledger));
    run(5, "space bounds", true, criterion_5(&ledger));
    results.sort_by_key(|r| r.0);

    println!();
    let mut gate = true;
    for (n, name, gating, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {n:>2} {name}: {}", o.detail);
        gate &= o.pass || !gating;
    }
    if !gate {
        std::process::exit(1);
    }
}
