//! Drives an [`Engine`] over an update stream and collects a report.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use anyhow::Context;
use csm_core::{
    Engine, EngineConfig, GraphError, Labels, MatchConfig, MatchMode, OrderStrategy, Phase, PhaseTimer, Polarity,
    Postpone, SearchStats, UpdateOp, UpdateStats,
};
use thiserror::Error;

use crate::format::{parse_initial_graph, parse_query, parse_update_stream, FormatOptions};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputMode {
    #[default]
    Count,
    Enumerate,
}

#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub graph: PathBuf,
    pub stream: PathBuf,
    pub query: PathBuf,
    pub mode: MatchMode,
    pub output: OutputMode,
    pub edge_labels: bool,
    pub directed: bool,
    pub order: OrderStrategy,
    pub postpone: Postpone,
    pub stats: bool,
    /// Zero means no limit.
    pub time_limit: Duration,
}

impl RunConfig {
    pub fn format(&self) -> FormatOptions {
        FormatOptions { directed: self.directed, edge_labels: self.edge_labels }
    }

    pub fn engine(&self) -> EngineConfig {
        EngineConfig {
            matching: MatchConfig {
                mode: self.mode,
                order: self.order,
                postpone: self.postpone,
                check_estimates: false,
            },
            track_locality: self.stats,
        }
    }
}

#[derive(Debug, Error)]
#[error("operation {index}: {source}")]
pub struct StreamError {
    pub index: usize,
    #[source]
    pub source: GraphError,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpRecord {
    /// 1-based position in the stream.
    pub index: usize,
    pub polarity: Polarity,
    pub count: u64,
    /// External ids, in query-vertex order; only filled in enumeration mode.
    pub matches: Vec<Vec<u64>>,
    pub update: UpdateStats,
    pub search: SearchStats,
    pub locality_bound: Option<usize>,
}

/// Wall time split as insertion/deletion times update/backtracking.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhaseTimes {
    pub insert_update: Duration,
    pub insert_backtrack: Duration,
    pub delete_update: Duration,
    pub delete_backtrack: Duration,
}

impl PhaseTimes {
    pub fn total(&self) -> Duration {
        self.insert_update + self.insert_backtrack + self.delete_update + self.delete_backtrack
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub query_ids: Vec<u64>,
    pub ops: Vec<OpRecord>,
    pub positive: u64,
    pub negative: u64,
    pub preprocessing: Duration,
    pub elapsed: Duration,
    pub phases: PhaseTimes,
    pub truncated: bool,
}

impl RunReport {
    /// The line-oriented report. Timing lines are only written when
    /// `times` is set, so that reports of identical runs compare equal.
    pub fn render(&self, stats: bool, times: bool) -> String {
        let mut out = String::new();
        for op in &self.ops {
            writeln!(out, "{} {} {}", op.index, op.polarity.sign(), op.count).unwrap();
            for m in &op.matches {
                out.push('m');
                for (u, v) in self.query_ids.iter().zip(m) {
                    write!(out, " u{u}:v{v}").unwrap();
                }
                out.push('\n');
            }
            if stats {
                let (u, s) = (&op.update, &op.search);
                write!(
                    out,
                    "# stat {} updated={} visited={} edcs={} seeds={} extensions={} selections={} rule1={}",
                    op.index,
                    u.updated_vertices,
                    u.visited_edges,
                    u.e_dcs_size,
                    s.seeds_started,
                    s.extensions,
                    s.selections,
                    s.rule1_backtracks
                )
                .unwrap();
                if let Some(b) = op.locality_bound {
                    write!(out, " bound={b}").unwrap();
                }
                out.push('\n');
            }
        }
        writeln!(out, "# total + {} - {}", self.positive, self.negative).unwrap();
        if self.truncated {
            writeln!(out, "# truncated after {} ops", self.ops.len()).unwrap();
        }
        if times {
            let p = &self.phases;
            let us = |d: Duration| d.as_micros();
            writeln!(
                out,
                "# time preprocessing_us={} elapsed_us={} insert_update_us={} insert_backtrack_us={} delete_update_us={} delete_backtrack_us={}",
                us(self.preprocessing),
                us(self.elapsed),
                us(p.insert_update),
                us(p.insert_backtrack),
                us(p.delete_update),
                us(p.delete_backtrack)
            )
            .unwrap();
        }
        out
    }
}

struct WallTimer {
    polarity: Polarity,
    started: Option<Instant>,
    times: PhaseTimes,
}

impl PhaseTimer for WallTimer {
    fn start(&mut self, _: Phase) {
        self.started = Some(Instant::now());
    }

    fn stop(&mut self, phase: Phase) {
        let Some(t) = self.started.take() else { return };
        let d = t.elapsed();
        let cell = match (self.polarity, phase) {
            (Polarity::Positive, Phase::Update) => &mut self.times.insert_update,
            (Polarity::Positive, Phase::Backtrack) => &mut self.times.insert_backtrack,
            (Polarity::Negative, Phase::Update) => &mut self.times.delete_update,
            (Polarity::Negative, Phase::Backtrack) => &mut self.times.delete_backtrack,
        };
        *cell += d;
    }
}

/// Runs every operation of `ops` through `engine`, in order. The time limit
/// is only checked between operations.
pub fn run_stream(
    engine: &mut Engine,
    ops: &[UpdateOp],
    output: OutputMode,
    time_limit: Duration,
) -> Result<RunReport, StreamError> {
    let q = engine.query();
    let mut report = RunReport {
        query_ids: (0..q.vertex_count()).map(|u| q.external_id(u)).collect(),
        ..RunReport::default()
    };
    let mut timer = WallTimer {
        polarity: Polarity::Positive,
        started: None,
        times: PhaseTimes::default(),
    };
    let start = Instant::now();
    for (i, op) in ops.iter().enumerate() {
        if !time_limit.is_zero() && start.elapsed() >= time_limit {
            report.truncated = true;
            break;
        }
        timer.polarity = if op.is_insertion() { Polarity::Positive } else { Polarity::Negative };
        let mut found: Vec<Vec<u32>> = Vec::new();
        let enumerate = output == OutputMode::Enumerate;
        let summary = engine
            .apply(op, &mut timer, &mut |m| {
                if enumerate {
                    found.push(m.to_vec());
                }
            })
            .map_err(|source| StreamError { index: i + 1, source })?;
        // removed vertices keep their external id
        let g = engine.graph();
        let found = found
            .into_iter()
            .map(|m| m.into_iter().map(|v| g.external_id(v)).collect())
            .collect();
        match summary.polarity {
            Polarity::Positive => report.positive += summary.matches,
            Polarity::Negative => report.negative += summary.matches,
        }
        report.ops.push(OpRecord {
            index: i + 1,
            polarity: summary.polarity,
            count: summary.matches,
            matches: found,
            update: summary.update,
            search: summary.search,
            locality_bound: summary.locality_bound,
        });
    }
    report.elapsed = start.elapsed();
    report.phases = timer.times;
    Ok(report)
}

/// Loads the inputs named in `cfg`, builds the index and runs the stream.
pub fn run_continuous_matching(cfg: &RunConfig) -> anyhow::Result<RunReport> {
    let read = |p: &PathBuf| fs::read_to_string(p).with_context(|| format!("reading {}", p.display()));
    let opts = cfg.format();
    let mut labels = Labels::new();
    let query = parse_query(&read(&cfg.query)?, opts, &mut labels).context("query file")?;
    let graph = parse_initial_graph(&read(&cfg.graph)?, opts, &mut labels).context("graph file")?;
    let ops = parse_update_stream(&read(&cfg.stream)?, opts, &mut labels).context("stream file")?;
    if query.is_directed() != graph.is_directed() {
        anyhow::bail!("query and data graph directedness differ");
    }
    let t = Instant::now();
    let mut engine = Engine::new(graph, query, cfg.engine());
    let preprocessing = t.elapsed();
    let mut report = run_stream(&mut engine, &ops, cfg.output, cfg.time_limit)?;
    report.preprocessing = preprocessing;
    Ok(report)
}
