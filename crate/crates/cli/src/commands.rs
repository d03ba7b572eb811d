use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use bdindex::index::{deserialize, serialize, IndexStats};
use bdindex::io::{load_edge_list, load_edge_list_with_ids, parse_update_stream, write_edge_list, IdMap, UpdateOp};
use bdindex::oracle::{oracle_dense, OracleLimits};
use bdindex::{build_index, compute_dense_subgraph, BdIndex, DynamicIndex, LevelPair, NodeRef, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bench::{write_records, BenchRecord, Op};
use crate::error::CliError;
use crate::gen::{generate, GenSpec};

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn stdout_err(e: io::Error) -> CliError {
    CliError::io(Path::new("<stdout>"), e)
}

fn load_index(path: &Path) -> Result<(BdIndex, IdMap), CliError> {
    let (index, ids) = deserialize(&read(path)?)?;
    Ok((index, ids.unwrap_or_default()))
}

fn label(ids: &IdMap, node: NodeRef) -> String {
    let prefix = match node.side {
        Side::Upper => 'u',
        Side::Lower => 'v',
    };
    format!("{prefix}{}", ids.external(node))
}

fn print_stats(out: &mut impl Write, s: &IndexStats) -> io::Result<()> {
    writeln!(out, "p: {}", s.p)?;
    writeln!(out, "upper entries: {}", s.upper_entries)?;
    writeln!(out, "lower entries: {}", s.lower_entries)?;
    writeln!(out, "upper cursors: {}", s.upper_cursors)?;
    writeln!(out, "lower cursors: {}", s.lower_cursors)?;
    writeln!(out, "model bytes: {}", s.model_bytes)
}

pub fn build(graph: &Path, index: &Path, bench: bool) -> Result<(), CliError> {
    let loaded = load_edge_list(&read(graph)?)?;
    if loaded.duplicates > 0 {
        eprintln!("warning: {} duplicate edges collapsed", loaded.duplicates);
    }
    let start = Instant::now();
    let (idx, _) = build_index(&loaded.graph);
    let elapsed = start.elapsed();
    write(index, &serialize(&idx, Some(&loaded.ids)))?;
    let mut out = io::stdout().lock();
    if bench {
        let mut r = BenchRecord::new(Op::Build, -1, -1, elapsed);
        r.result_size = idx.stats().entry_count;
        return write_records(out, &[r]);
    }
    (|| {
        writeln!(out, "edges: {}", loaded.graph.edge_count())?;
        print_stats(&mut out, &idx.stats())?;
        writeln!(out, "build seconds: {:.3}", elapsed.as_secs_f64())
    })()
    .map_err(stdout_err)
}

pub fn stats(index: &Path) -> Result<(), CliError> {
    let (idx, _) = load_index(index)?;
    print_stats(&mut io::stdout().lock(), &idx.stats()).map_err(stdout_err)
}

pub struct QueryOptions {
    pub index: PathBuf,
    pub levels: Option<(u32, u32)>,
    pub random: Option<usize>,
    pub seed: u64,
    pub max_level: Option<u32>,
    pub bench: bool,
    pub deterministic: bool,
}

fn timed_query(idx: &BdIndex, alpha: u32, beta: u32, deterministic: bool) -> (BenchRecord, Vec<NodeRef>) {
    let start = Instant::now();
    let (nodes, cost) = idx.query_counted(alpha, beta);
    let nodes = nodes.to_vec();
    let elapsed = if deterministic { Duration::ZERO } else { start.elapsed() };
    let mut r = BenchRecord::new(Op::Query, alpha as i64, beta as i64, elapsed);
    r.result_size = nodes.len();
    r.entries_touched = cost.touched();
    (r, nodes)
}

pub fn query(o: &QueryOptions) -> Result<(), CliError> {
    let (idx, ids) = load_index(&o.index)?;
    let out = io::stdout().lock();
    if let Some((alpha, beta)) = o.levels {
        let (record, nodes) = timed_query(&idx, alpha, beta, o.deterministic);
        if o.bench {
            return write_records(out, &[record]);
        }
        let mut out = BufWriter::new(out);
        for n in nodes {
            writeln!(out, "{}", label(&ids, n)).map_err(stdout_err)?;
        }
        return out.flush().map_err(stdout_err);
    }
    let count = o.random.unwrap_or(0);
    let top = o.max_level.unwrap_or(idx.p().max(0) as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let levels: Vec<(u32, u32)> = (0..count)
        .map(|_| (rng.gen_range(0..=top), rng.gen_range(0..=top)))
        .collect();
    let records: Vec<BenchRecord> = levels
        .par_iter()
        .map(|&(a, b)| timed_query(&idx, a, b, o.deterministic).0)
        .collect();
    write_records(out, &records)
}

pub struct UpdateOptions {
    pub graph: PathBuf,
    pub index: PathBuf,
    pub stream: PathBuf,
    pub time_mode: bool,
    pub verify_each: bool,
    pub lenient: bool,
    pub out: PathBuf,
    pub graph_out: Option<PathBuf>,
    pub bench: bool,
    pub deterministic: bool,
}

pub fn update(o: &UpdateOptions) -> Result<(), CliError> {
    let (idx, ids) = load_index(&o.index)?;
    let loaded = load_edge_list_with_ids(&read(&o.graph)?, ids)?;
    let mut ids = loaded.ids;
    let ops = parse_update_stream(&read(&o.stream)?)?;
    if o.verify_each && build_index(&loaded.graph).0 != idx {
        return Err(CliError::Data(format!(
            "{} does not match {}",
            o.index.display(),
            o.graph.display()
        )));
    }

    let p_before = idx.p();
    let mut d = DynamicIndex::from_index(loaded.graph, idx);
    if o.time_mode {
        d.enable_time_mode();
    }
    d.set_checked(o.verify_each);

    let mut records = Vec::with_capacity(ops.len());
    let mut skipped = 0;
    for (i, op) in ops.iter().enumerate() {
        let (eu, ev) = op.ids();
        let present = match (ids.get(Side::Upper, eu), ids.get(Side::Lower, ev)) {
            (Some(a), Some(b)) => d.graph().contains_node(NodeRef::upper(a))
                && d.graph().contains_node(NodeRef::lower(b))
                && d.graph().has_edge(a, b),
            _ => false,
        };
        let applicable = matches!(op, UpdateOp::Insert { .. }) != present;
        if !applicable {
            let what = match op {
                UpdateOp::Insert { .. } => "edge already present",
                UpdateOp::Delete { .. } => "edge not present",
            };
            let message = format!("update {} ({eu}, {ev}): {what}", i + 1);
            if !o.lenient {
                return Err(CliError::Data(message));
            }
            eprintln!("skipped {message}");
            skipped += 1;
            continue;
        }
        let u = NodeRef::upper(ids.intern(Side::Upper, eu));
        let v = NodeRef::lower(ids.intern(Side::Lower, ev));
        let start = Instant::now();
        let (report, kind) = match (op, o.time_mode) {
            (UpdateOp::Insert { .. }, false) => (d.insert_s(u, v)?, Op::InsertS),
            (UpdateOp::Delete { .. }, false) => (d.delete_s(u, v)?, Op::DeleteS),
            (UpdateOp::Insert { .. }, true) => (d.insert_t(u, v)?, Op::InsertT),
            (UpdateOp::Delete { .. }, true) => (d.delete_t(u, v)?, Op::DeleteT),
        };
        let elapsed = if o.deterministic { Duration::ZERO } else { start.elapsed() };
        let mut record = BenchRecord::new(kind, -1, -1, elapsed);
        record.result_size = report.rows_rebuilt;
        records.push(record);
        if o.verify_each {
            let start = Instant::now();
            let (fresh, _) = build_index(d.graph());
            let elapsed = if o.deterministic { Duration::ZERO } else { start.elapsed() };
            let mut r = BenchRecord::new(Op::Rebuild, -1, -1, elapsed);
            r.result_size = fresh.stats().entry_count;
            records.push(r);
            if &fresh != d.index() {
                return Err(CliError::Invariant(format!(
                    "index differs from a rebuild after update {} ({eu}, {ev})",
                    i + 1
                )));
            }
        }
    }

    write(&o.out, &serialize(d.index(), Some(&ids)))?;
    if let Some(path) = &o.graph_out {
        let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut w = BufWriter::new(file);
        write_edge_list(d.graph(), &ids, &mut w)
            .and_then(|_| w.flush())
            .map_err(|e| CliError::io(path, e))?;
    }
    if o.bench {
        write_records(io::stdout().lock(), &records)
    } else {
        println!(
            "applied {} updates, skipped {skipped}; p {p_before} -> {}",
            ops.len() - skipped,
            d.index().p()
        );
        Ok(())
    }
}

pub fn verify(graph: &Path, levels: u32) -> Result<(), CliError> {
    let loaded = load_edge_list(&read(graph)?)?;
    let g = &loaded.graph;
    let limits = OracleLimits::default();
    if g.edge_count() > limits.max_edges {
        return Err(CliError::Data(format!(
            "graph has {} edges; the brute-force check handles at most {}",
            g.edge_count(),
            limits.max_edges
        )));
    }
    let (idx, _) = build_index(g);
    let mut out = io::stdout().lock();
    let header: String = (0..=levels).map(|b| format!("{b:>3}")).collect();
    writeln!(out, "a\\b{header}").map_err(stdout_err)?;
    let mut failure = None;
    for a in 0..=levels {
        let mut line = format!("{a:>3}");
        for b in 0..=levels {
            let oracle = oracle_dense(g, a, b, &limits)?;
            let flow = compute_dense_subgraph(g, LevelPair::new(a, b));
            let mut indexed = idx.query(a, b).to_vec();
            indexed.sort();
            let ok = oracle == flow && flow == indexed;
            if !ok && failure.is_none() {
                let show = |s: &[NodeRef]| s.iter().map(|&n| label(&loaded.ids, n)).collect::<Vec<_>>().join(" ");
                failure = Some(format!(
                    "alpha {a}, beta {b}: oracle [{}], flow [{}], index [{}]",
                    show(&oracle),
                    show(&flow),
                    show(&indexed)
                ));
            }
            line.push_str(if ok { "  ." } else { "  X" });
        }
        writeln!(out, "{line}").map_err(stdout_err)?;
    }
    match failure {
        Some(f) => Err(CliError::Invariant(f)),
        None => {
            writeln!(out, "pass").map_err(stdout_err)?;
            Ok(())
        }
    }
}

pub fn gen(spec: &GenSpec) -> Result<(), CliError> {
    let edges = generate(spec)?;
    let mut out = BufWriter::new(io::stdout().lock());
    (|| {
        writeln!(out, "% bip unweighted")?;
        for (u, v) in edges {
            writeln!(out, "{u} {v}")?;
        }
        out.flush()
    })()
    .map_err(stdout_err)
}
