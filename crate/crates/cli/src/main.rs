//! `bdindex`: build, query and maintain dense-subgraph indexes from the
//! command line.

mod bench;
mod commands;
mod error;
mod gen;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::gen::Model;

#[derive(Debug, Parser)]
#[command(name = "bdindex", version, about = "Dense-subgraph index for bipartite graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an index from an edge list and write it to disk.
    Build {
        graph: PathBuf,
        index: PathBuf,
        /// Print a CSV record instead of the summary.
        #[arg(long)]
        bench: bool,
    },
    /// Answer one query, or benchmark a random workload.
    Query(QueryArgs),
    /// Replay an update stream against a graph and its index.
    Update(UpdateArgs),
    /// Compare brute force, flow and index answers on a small graph.
    Verify {
        graph: PathBuf,
        /// Largest alpha and beta to sweep.
        #[arg(long, default_value_t = 3)]
        levels: u32,
    },
    /// Write a synthetic edge list to standard output.
    Gen(GenArgs),
    /// Print space accounting for an index file.
    Stats {
        index: PathBuf,
    },
}

#[derive(Debug, Args)]
struct QueryArgs {
    index: PathBuf,
    #[arg(requires = "beta", conflicts_with = "random")]
    alpha: Option<u32>,
    beta: Option<u32>,
    /// Run this many uniformly drawn queries and report them as CSV.
    #[arg(long, required_unless_present = "alpha")]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Upper end of the drawn levels; defaults to the index's p.
    #[arg(long)]
    max_level: Option<u32>,
    /// Emit CSV records instead of node ids.
    #[arg(long)]
    bench: bool,
    /// Report zero elapsed time so repeated runs are byte-identical.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Space,
    Time,
}

#[derive(Debug, Args)]
struct UpdateArgs {
    graph: PathBuf,
    index: PathBuf,
    stream: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Time)]
    mode: Mode,
    /// Rebuild after every update and stop on the first difference.
    #[arg(long)]
    verify_each: bool,
    /// Skip inapplicable updates instead of failing.
    #[arg(long)]
    lenient: bool,
    /// Where to write the updated index; defaults to the input index.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the updated graph as an edge list.
    #[arg(long)]
    graph_out: Option<PathBuf>,
    /// Print one CSV record per update.
    #[arg(long)]
    bench: bool,
    /// Report zero elapsed time in CSV records.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long)]
    upper: u64,
    #[arg(long)]
    lower: u64,
    /// Edge count (ignored by the complete model).
    #[arg(long, default_value_t = 0)]
    edges: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Power-law exponent.
    #[arg(long, default_value_t = 1.0)]
    exponent: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Build { graph, index, bench } => commands::build(&graph, &index, bench),
        Command::Query(a) => commands::query(&commands::QueryOptions {
            index: a.index,
            levels: a.alpha.zip(a.beta),
            random: a.random,
            seed: a.seed,
            max_level: a.max_level,
            bench: a.bench,
            deterministic: a.deterministic,
        }),
        Command::Update(a) => commands::update(&commands::UpdateOptions {
            out: a.out.clone().unwrap_or_else(|| a.index.clone()),
            graph: a.graph,
            index: a.index,
            stream: a.stream,
            time_mode: a.mode == Mode::Time,
            verify_each: a.verify_each,
            lenient: a.lenient,
            graph_out: a.graph_out,
            bench: a.bench,
            deterministic: a.deterministic,
        }),
        Command::Verify { graph, levels } => commands::verify(&graph, levels),
        Command::Gen(a) => commands::gen(&gen::GenSpec {
            model: a.model,
            upper: a.upper,
            lower: a.lower,
            edges: a.edges,
            seed: a.seed,
            exponent: a.exponent,
        }),
        Command::Stats { index } => commands::stats(&index),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
