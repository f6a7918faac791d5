//! Per-operation driver: keeps the data graph, the index and the matcher in
//! step for each update.
//!
//! An edge insertion computes the changed index edges, inserts the data edge,
//! updates the index and then searches. An edge deletion searches first,
//! against the graph and index that still contain the edge, then deletes and
//! updates.

use alloc::vec::Vec;

use crate::dag::{build_dag, QueryDag};
use crate::dcs::{dcs_changed_edges, Cell, Dcs, DcsEdge, EdgeChange, UpdateStats};
use crate::graph::{DataGraph, GraphError, QueryGraph, VertexId};
use crate::label::Label;
use crate::matcher::{find_matches, MatchConfig, SearchStats};
use crate::update::UpdateOp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn sign(self) -> char {
        match self {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Update,
    Backtrack,
}

/// Receives phase boundaries; the engine itself has no clock.
pub trait PhaseTimer {
    fn start(&mut self, phase: Phase);
    fn stop(&mut self, phase: Phase);
}

impl PhaseTimer for () {
    fn start(&mut self, _: Phase) {}
    fn stop(&mut self, _: Phase) {}
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineConfig {
    pub matching: MatchConfig,
    /// Compute [`OpSummary::locality_bound`] after every index update.
    pub track_locality: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpSummary {
    pub polarity: Polarity,
    pub matches: u64,
    /// Summed over the edge updates of the operation.
    pub update: UpdateStats,
    pub search: SearchStats,
    /// Sum of the index degrees of the flipped pairs plus the number of
    /// changed index edges, when tracked. Degrees count the changed edges
    /// themselves, for deletions as well.
    pub locality_bound: Option<usize>,
}

impl OpSummary {
    fn new(polarity: Polarity, track: bool) -> Self {
        OpSummary {
            polarity,
            matches: 0,
            update: UpdateStats::default(),
            search: SearchStats::default(),
            locality_bound: track.then_some(0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Engine {
    graph: DataGraph,
    query: QueryGraph,
    dag: QueryDag,
    dcs: Dcs,
    config: EngineConfig,
}

impl Engine {
    pub fn new(graph: DataGraph, query: QueryGraph, config: EngineConfig) -> Engine {
        let dag = build_dag(&query);
        let dcs = Dcs::build(&graph, &query, &dag);
        Engine {
            graph,
            query,
            dag,
            dcs,
            config,
        }
    }

    pub fn graph(&self) -> &DataGraph {
        &self.graph
    }

    pub fn query(&self) -> &QueryGraph {
        &self.query
    }

    pub fn dag(&self) -> &QueryDag {
        &self.dag
    }

    pub fn dcs(&self) -> &Dcs {
        &self.dcs
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn set_config(&mut self, config: EngineConfig) {
        self.config = config;
    }

    /// The index built from scratch on the current graph.
    pub fn rebuild(&self) -> Dcs {
        Dcs::build(&self.graph, &self.query, &self.dag)
    }

    /// Applies one update and reports the matches it creates or destroys to
    /// `sink`, as data vertices in query-vertex order. On error nothing has
    /// been changed.
    pub fn apply(
        &mut self,
        op: &UpdateOp,
        timer: &mut dyn PhaseTimer,
        sink: &mut dyn FnMut(&[VertexId]),
    ) -> Result<OpSummary, GraphError> {
        let resolve = |id: u64| self.graph.vertex(id).ok_or(GraphError::UnknownVertex(id));
        match *op {
            UpdateOp::InsertEdge { src, dst, label } => {
                let (a, b) = (resolve(src)?, resolve(dst)?);
                let mut s = OpSummary::new(Polarity::Positive, self.config.track_locality);
                self.insert_edge(a, b, label, &mut s, timer, sink)?;
                Ok(s)
            }
            UpdateOp::DeleteEdge { src, dst } => {
                let (a, b) = (resolve(src)?, resolve(dst)?);
                let mut s = OpSummary::new(Polarity::Negative, self.config.track_locality);
                self.delete_edge(a, b, &mut s, timer, sink)?;
                Ok(s)
            }
            UpdateOp::InsertVertex { id, label } => {
                let mut s = OpSummary::new(Polarity::Positive, self.config.track_locality);
                timer.start(Phase::Update);
                let v = self.graph.add_vertex(id, label);
                if let Ok(v) = v {
                    self.dcs.add_vertex(&self.graph, v);
                }
                timer.stop(Phase::Update);
                let v = v?;
                self.single_vertex_match(v, &mut s, timer, sink);
                Ok(s)
            }
            UpdateOp::DeleteVertex { id } => {
                let v = resolve(id)?;
                let mut s = OpSummary::new(Polarity::Negative, self.config.track_locality);
                self.single_vertex_match(v, &mut s, timer, sink);
                let incident: Vec<VertexId> = self.graph.neighbors(v).to_vec();
                for w in incident {
                    if self.graph.edge_label(v, w).is_some() {
                        self.delete_edge(v, w, &mut s, timer, sink)?;
                    }
                    if self.graph.is_directed() && self.graph.edge_label(w, v).is_some() {
                        self.delete_edge(w, v, &mut s, timer, sink)?;
                    }
                }
                timer.start(Phase::Update);
                let label = self.graph.label(v).expect("live vertex");
                self.graph.remove_vertex(v)?;
                self.dcs.remove_vertex(v, label);
                timer.stop(Phase::Update);
                s.update.updated.sort_unstable();
                s.update.updated.dedup();
                s.update.updated_vertices = s.update.updated.len();
                Ok(s)
            }
        }
    }

    // A single-vertex query has no edges, so its matches appear and vanish
    // with vertices only.
    fn single_vertex_match(
        &mut self,
        v: VertexId,
        s: &mut OpSummary,
        timer: &mut dyn PhaseTimer,
        sink: &mut dyn FnMut(&[VertexId]),
    ) {
        if self.query.vertex_count() == 1 && self.dcs.d2(0, v) {
            timer.start(Phase::Backtrack);
            s.matches += 1;
            s.search.matches += 1;
            sink(&[v]);
            timer.stop(Phase::Backtrack);
        }
    }

    fn insert_edge(
        &mut self,
        a: VertexId,
        b: VertexId,
        label: Label,
        s: &mut OpSummary,
        timer: &mut dyn PhaseTimer,
        sink: &mut dyn FnMut(&[VertexId]),
    ) -> Result<(), GraphError> {
        timer.start(Phase::Update);
        let change = EdgeChange { src: a, dst: b, label, insert: true };
        let e_dcs = dcs_changed_edges(&self.graph, &self.query, change);
        if let Err(e) = self.graph.insert_edge(a, b, label) {
            timer.stop(Phase::Update);
            return Err(e);
        }
        let mut stats = UpdateStats::default();
        self.dcs.insertion_update(&self.graph, &e_dcs, &mut stats);
        self.account(stats, &e_dcs, s, true);
        timer.stop(Phase::Update);

        timer.start(Phase::Backtrack);
        s.matches += find_matches(
            &self.graph,
            &self.query,
            &self.dcs,
            &e_dcs,
            &self.config.matching,
            &mut s.search,
            sink,
        );
        timer.stop(Phase::Backtrack);
        Ok(())
    }

    fn delete_edge(
        &mut self,
        a: VertexId,
        b: VertexId,
        s: &mut OpSummary,
        timer: &mut dyn PhaseTimer,
        sink: &mut dyn FnMut(&[VertexId]),
    ) -> Result<(), GraphError> {
        let label = self
            .graph
            .edge_label(a, b)
            .ok_or_else(|| GraphError::MissingEdge(self.graph.external_id(a), self.graph.external_id(b)))?;
        timer.start(Phase::Update);
        let change = EdgeChange { src: a, dst: b, label, insert: false };
        let e_dcs = dcs_changed_edges(&self.graph, &self.query, change);
        timer.stop(Phase::Update);

        timer.start(Phase::Backtrack);
        s.matches += find_matches(
            &self.graph,
            &self.query,
            &self.dcs,
            &e_dcs,
            &self.config.matching,
            &mut s.search,
            sink,
        );
        timer.stop(Phase::Backtrack);

        timer.start(Phase::Update);
        self.graph.delete_edge(a, b)?;
        let mut stats = UpdateStats::default();
        self.dcs.deletion_update(&self.graph, &e_dcs, &mut stats);
        self.account(stats, &e_dcs, s, false);
        timer.stop(Phase::Update);
        Ok(())
    }

    // Degrees are taken in the index that contains the changed edges: after
    // an insertion, before a deletion.
    fn account(&self, stats: UpdateStats, e_dcs: &[DcsEdge], s: &mut OpSummary, insert: bool) {
        if let Some(bound) = s.locality_bound.as_mut() {
            let degree = |c: Cell| {
                let pending = if insert {
                    0
                } else {
                    e_dcs.iter().filter(|e| e.from == c || e.to == c).count()
                };
                self.dcs.degree(&self.graph, c) + pending
            };
            *bound += e_dcs.len() + stats.updated.iter().map(|&c| degree(c)).sum::<usize>();
        }
        s.update.updated_vertices += stats.updated_vertices;
        s.update.visited_edges += stats.visited_edges;
        s.update.e_dcs_size += stats.e_dcs_size;
        s.update.updated.extend(stats.updated);
    }
}
