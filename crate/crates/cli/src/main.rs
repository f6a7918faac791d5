use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use csm_cli::format::{parse_initial_graph, parse_query, parse_update_stream, FormatOptions};
use csm_cli::harness::{run_continuous_matching, OutputMode, RunConfig};
use csm_cli::workload::{generate_workload, WorkloadParams};
use csm_core::oracle::{delta_matches, OracleLimits};
use csm_core::{build_dag, Labels, MatchMode, OrderStrategy, Postpone};

#[derive(Parser)]
#[command(name = "csm", version, about = "Continuous subgraph matching over a graph update stream")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the matches created or destroyed by every update.
    Run(RunArgs),
    /// Write a random graph, update stream and query.
    Gen(GenArgs),
    /// Per-operation match counts from the brute-force reference.
    #[command(hide = true)]
    Oracle(OracleArgs),
    /// Print the rooted query DAG.
    #[command(hide = true)]
    Dag(DagArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Iso,
    Hom,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Count,
    Enum,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Estimated,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Isolation {
    Iso,
    Leaf,
}

#[derive(Args)]
struct Inputs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    stream: PathBuf,
    #[arg(long)]
    query: PathBuf,
    /// Read and match edge labels.
    #[arg(long)]
    edge_labels: bool,
    #[arg(long)]
    directed: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_enum, default_value = "iso")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "count")]
    output: Output,
    #[arg(long, value_enum, default_value = "estimated")]
    order: Order,
    /// Which extendable vertices are matched last.
    #[arg(long, value_enum, default_value = "iso")]
    isolation: Isolation,
    /// Emit `# stat` lines per operation and phase timings.
    #[arg(long)]
    stats: bool,
    /// Stop between operations after this many seconds; 0 disables.
    #[arg(long, default_value_t = 0.0)]
    time_limit: f64,
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    vertices: usize,
    #[arg(long, default_value_t = 2)]
    labels: u32,
    /// Number of edge labels; 0 leaves edges unlabeled.
    #[arg(long, default_value_t = 0)]
    edge_labels: u32,
    #[arg(long, default_value_t = 15)]
    edges: usize,
    #[arg(long, default_value_t = 20)]
    ops: usize,
    /// Deletions per 100 insertions.
    #[arg(long, default_value_t = 10)]
    deletion_rate: u32,
    #[arg(long, default_value_t = 3)]
    query_edges: usize,
    #[arg(long)]
    directed: bool,
    /// Directory receiving graph.txt, stream.txt and query.txt.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_enum, default_value = "iso")]
    mode: Mode,
    #[arg(long, default_value_t = 64)]
    max_data_vertices: usize,
}

#[derive(Args)]
struct DagArgs {
    #[arg(long)]
    query: PathBuf,
    #[arg(long)]
    directed: bool,
    #[arg(long)]
    edge_labels: bool,
}

fn match_mode(m: Mode) -> MatchMode {
    match m {
        Mode::Iso => MatchMode::Iso,
        Mode::Hom => MatchMode::Hom,
    }
}

fn read(p: &PathBuf) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn run(a: RunArgs) -> Result<()> {
    let cfg = RunConfig {
        graph: a.inputs.graph,
        stream: a.inputs.stream,
        query: a.inputs.query,
        mode: match_mode(a.mode),
        output: match a.output {
            Output::Count => OutputMode::Count,
            Output::Enum => OutputMode::Enumerate,
        },
        edge_labels: a.inputs.edge_labels,
        directed: a.inputs.directed,
        order: match a.order {
            Order::Estimated => OrderStrategy::Estimated,
            Order::Exact => OrderStrategy::Exact,
        },
        postpone: match a.isolation {
            Isolation::Iso => Postpone::Isolated,
            Isolation::Leaf => Postpone::Leaf,
        },
        stats: a.stats,
        time_limit: Duration::from_secs_f64(a.time_limit.max(0.0)),
    };
    let report = run_continuous_matching(&cfg)?;
    let text = report.render(cfg.stats, cfg.stats);
    print!("{text}");
    if let Some(path) = a.report {
        fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn gen(a: GenArgs) -> Result<()> {
    let params = WorkloadParams {
        vertices: a.vertices,
        vertex_labels: a.labels,
        edge_labels: a.edge_labels,
        edges: a.edges,
        ops: a.ops,
        deletion_rate: a.deletion_rate,
        query_edges: a.query_edges,
        directed: a.directed,
    };
    let w = generate_workload(a.seed, &params)?;
    fs::create_dir_all(&a.out)?;
    fs::write(a.out.join("graph.txt"), w.graph_text())?;
    fs::write(a.out.join("stream.txt"), w.stream_text())?;
    fs::write(a.out.join("query.txt"), w.query_text())?;
    Ok(())
}

fn oracle(a: OracleArgs) -> Result<()> {
    let opts = FormatOptions { directed: a.inputs.directed, edge_labels: a.inputs.edge_labels };
    let mut labels = Labels::new();
    let q = parse_query(&read(&a.inputs.query)?, opts, &mut labels)?;
    let mut g = parse_initial_graph(&read(&a.inputs.graph)?, opts, &mut labels)?;
    let ops = parse_update_stream(&read(&a.inputs.stream)?, opts, &mut labels)?;
    let limits = OracleLimits { max_data_vertices: a.max_data_vertices, ..OracleLimits::default() };
    for (i, op) in ops.iter().enumerate() {
        let d = delta_matches(&q, &g, op, match_mode(a.mode), limits).with_context(|| format!("operation {}", i + 1))?;
        let (sign, n) = if op.is_insertion() { ('+', d.positive.len()) } else { ('-', d.negative.len()) };
        println!("{} {sign} {n}", i + 1);
        if let csm_core::UpdateOp::DeleteVertex { id } = *op {
            let v = g.vertex(id).context("unknown vertex")?;
            for w in g.neighbors(v).to_vec() {
                for (x, y) in [(v, w), (w, v)] {
                    if g.edge_label(x, y).is_some() {
                        g.delete_edge(x, y)?;
                    }
                }
            }
        }
        g.apply(op).with_context(|| format!("operation {}", i + 1))?;
    }
    Ok(())
}

fn dag(a: DagArgs) -> Result<()> {
    let opts = FormatOptions { directed: a.directed, edge_labels: a.edge_labels };
    let q = parse_query(&read(&a.query)?, opts, &mut Labels::new())?;
    let dag = build_dag(&q);
    println!("root {}", q.external_id(dag.root()));
    for (p, c) in dag.edges() {
        println!("{} {}", q.external_id(p), q.external_id(c));
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(a) => run(a),
        Command::Gen(a) => gen(a),
        Command::Oracle(a) => oracle(a),
        Command::Dag(a) => dag(a),
    }
}
