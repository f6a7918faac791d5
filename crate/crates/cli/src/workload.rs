//! Seeded random workloads: an initial graph, an update stream and a query
//! obtained by a random walk.

use std::collections::BTreeSet;

use csm_core::{DataGraph, Label, Labels, QueryGraph, UpdateOp, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::format::{write_graph, write_stream, FormatOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WorkloadParams {
    pub vertices: usize,
    pub vertex_labels: u32,
    /// Zero disables edge labels.
    pub edge_labels: u32,
    pub edges: usize,
    pub ops: usize,
    /// Edge deletions per 100 edge insertions.
    pub deletion_rate: u32,
    pub query_edges: usize,
    pub directed: bool,
}

impl Default for WorkloadParams {
    fn default() -> Self {
        WorkloadParams {
            vertices: 10,
            vertex_labels: 2,
            edge_labels: 0,
            edges: 15,
            ops: 20,
            deletion_rate: 10,
            query_edges: 3,
            directed: false,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WorkloadError {
    #[error("{edges} edges do not fit in a simple graph on {vertices} vertices")]
    TooManyEdges { edges: usize, vertices: usize },
    #[error("at least one vertex label is required")]
    NoLabels,
    #[error("no random walk found a query with {0} distinct edges")]
    NoQuery(usize),
}

#[derive(Clone, Debug)]
pub struct Workload {
    pub labels: Labels,
    pub graph: DataGraph,
    pub query: QueryGraph,
    pub ops: Vec<UpdateOp>,
    pub format: FormatOptions,
}

impl Workload {
    pub fn graph_text(&self) -> String {
        write_graph(&self.graph, self.format, &self.labels)
    }

    pub fn query_text(&self) -> String {
        write_graph(self.query.graph(), self.format, &self.labels)
    }

    pub fn stream_text(&self) -> String {
        write_stream(&self.ops, self.format, &self.labels)
    }
}

type Pair = (VertexId, VertexId);

fn capacity(n: usize, directed: bool) -> usize {
    let pairs = n * n.saturating_sub(1);
    if directed {
        pairs
    } else {
        pairs / 2
    }
}

// A uniformly random absent edge, by rejection while the graph is sparse
// and by enumeration otherwise.
fn absent_pair(rng: &mut ChaCha8Rng, n: usize, present: &BTreeSet<Pair>, directed: bool) -> Option<Pair> {
    let norm = |a: VertexId, b: VertexId| if directed || a < b { (a, b) } else { (b, a) };
    if present.len() * 2 < capacity(n, directed) {
        loop {
            let (a, b) = (rng.gen_range(0..n) as VertexId, rng.gen_range(0..n) as VertexId);
            if a != b && !present.contains(&norm(a, b)) {
                return Some(norm(a, b));
            }
        }
    }
    let free: Vec<Pair> = (0..n as VertexId)
        .flat_map(|a| (0..n as VertexId).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && (directed || a < b) && !present.contains(&(a, b)))
        .collect();
    free.choose(rng).copied()
}

/// Generates a workload; identical seeds and parameters give identical
/// workloads.
pub fn generate_workload(seed: u64, p: &WorkloadParams) -> Result<Workload, WorkloadError> {
    if p.vertex_labels == 0 {
        return Err(WorkloadError::NoLabels);
    }
    let cap = capacity(p.vertices, p.directed);
    if p.edges > cap {
        return Err(WorkloadError::TooManyEdges { edges: p.edges, vertices: p.vertices });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels = Labels::new();
    let vertex_labels: Vec<Label> = (0..p.vertex_labels).map(|i| labels.vertex.intern(&format!("L{i}"))).collect();
    let edge_labels: Vec<Label> = (0..p.edge_labels).map(|i| labels.edge.intern(&format!("e{i}"))).collect();
    let edge_label = |rng: &mut ChaCha8Rng| edge_labels.choose(rng).copied().unwrap_or(Label::UNLABELED);

    let mut graph = DataGraph::new(p.directed);
    for i in 0..p.vertices {
        graph.add_vertex(i as u64, *vertex_labels.choose(&mut rng).unwrap()).unwrap();
    }
    let mut present = BTreeSet::new();
    for _ in 0..p.edges {
        let (a, b) = absent_pair(&mut rng, p.vertices, &present, p.directed).expect("below capacity");
        present.insert((a, b));
        graph.insert_edge(a, b, edge_label(&mut rng)).unwrap();
    }

    // Every edge that ever exists, for the query walk.
    let mut walked = graph.clone();
    let mut current: Vec<Pair> = present.iter().copied().collect();
    let mut ops = Vec::with_capacity(p.ops);
    let delete_weight = f64::from(p.deletion_rate) / (100.0 + f64::from(p.deletion_rate));
    for _ in 0..p.ops {
        let delete = !current.is_empty() && (current.len() == cap || rng.gen_bool(delete_weight));
        if delete {
            let (a, b) = current.swap_remove(rng.gen_range(0..current.len()));
            present.remove(&(a, b));
            ops.push(UpdateOp::DeleteEdge { src: a as u64, dst: b as u64 });
        } else if let Some((a, b)) = absent_pair(&mut rng, p.vertices, &present, p.directed) {
            present.insert((a, b));
            current.push((a, b));
            let label = edge_label(&mut rng);
            if walked.edge_label(a, b).is_none() {
                walked.insert_edge(a, b, label).unwrap();
            }
            ops.push(UpdateOp::InsertEdge { src: a as u64, dst: b as u64, label });
        }
    }

    let query = random_walk_query(&mut rng, &walked, p.query_edges)?;
    Ok(Workload {
        labels,
        graph,
        query,
        ops,
        format: FormatOptions { directed: p.directed, edge_labels: p.edge_labels > 0 },
    })
}

// Walks `g` ignoring edge direction until `k` distinct vertex pairs are
// joined and copies one edge per pair, with its label and direction, into a
// query.
fn random_walk_query(rng: &mut ChaCha8Rng, g: &DataGraph, k: usize) -> Result<QueryGraph, WorkloadError> {
    let starts: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) > 0).collect();
    for _ in 0..100 {
        let mut edges: BTreeSet<Pair> = BTreeSet::new();
        let mut order: Vec<VertexId> = Vec::new();
        let Some(&start) = starts.choose(rng) else { break };
        let mut at = start;
        order.push(at);
        for _ in 0..20 * k.max(1) {
            if edges.len() == k {
                break;
            }
            let &next = g.neighbors(at).choose(rng).expect("walk stays in a component");
            edges.insert((at.min(next), at.max(next)));
            if !order.contains(&next) {
                order.push(next);
            }
            at = next;
        }
        if edges.len() < k {
            continue;
        }
        let mut q = DataGraph::new(g.is_directed());
        for (i, &v) in order.iter().enumerate() {
            q.add_vertex(i as u64, g.label(v).unwrap()).unwrap();
        }
        let pos = |v: VertexId| order.iter().position(|&w| w == v).unwrap() as VertexId;
        for &(a, b) in &edges {
            // one query edge per walked pair, even if both directions exist
            let (x, y) = if g.edge_label(a, b).is_some() { (a, b) } else { (b, a) };
            q.insert_edge(pos(x), pos(y), g.edge_label(x, y).unwrap()).unwrap();
        }
        return Ok(QueryGraph::new(q).expect("walk is connected"));
    }
    Err(WorkloadError::NoQuery(k))
}
