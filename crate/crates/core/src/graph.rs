//! Dynamic labeled data graph and the static query graph.
//!
//! Vertices get dense internal ids in insertion order; the external ids used
//! in files are kept alongside for output. Removed vertices leave a tombstone
//! slot so that internal ids stay stable for the lifetime of the graph.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use hashbrown::HashMap;
use thiserror::Error;

use crate::label::Label;
use crate::update::UpdateOp;

/// Dense internal vertex id.
pub type VertexId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} already exists")]
    DuplicateVertex(u64),
    #[error("unknown vertex {0}")]
    UnknownVertex(u64),
    #[error("edge ({0}, {1}) already exists")]
    DuplicateEdge(u64, u64),
    #[error("edge ({0}, {1}) does not exist")]
    MissingEdge(u64, u64),
    #[error("self-loop on vertex {0}")]
    SelfLoop(u64),
    #[error("vertex {0} still has incident edges")]
    VertexHasEdges(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("query graph is empty")]
    Empty,
    #[error("query graph is not connected")]
    Disconnected,
    #[error("query graph contains removed vertices")]
    Tombstones,
}

/// The edges present between an ordered vertex pair `(a, b)`: `forward` is
/// the label of `a -> b`, `backward` of `b -> a`. In undirected graphs both
/// are equal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PairEdges {
    pub forward: Option<Label>,
    pub backward: Option<Label>,
}

impl PairEdges {
    pub fn is_empty(&self) -> bool {
        self.forward.is_none() && self.backward.is_none()
    }

    /// True if every edge in `required` is present here with the same label.
    #[inline]
    pub fn satisfies(&self, required: PairEdges) -> bool {
        (required.forward.is_none() || self.forward == required.forward)
            && (required.backward.is_none() || self.backward == required.backward)
    }

    pub fn reversed(self) -> PairEdges {
        PairEdges {
            forward: self.backward,
            backward: self.forward,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataGraph {
    directed: bool,
    labels: Vec<Option<Label>>,
    external: Vec<u64>,
    index: HashMap<u64, VertexId>,
    // Sorted union of in- and out-neighbors.
    adjacency: Vec<Vec<VertexId>>,
    // adjacency partitioned by neighbor label, each list sorted.
    by_label: Vec<BTreeMap<Label, Vec<VertexId>>>,
    // Keyed by (src, dst) when directed, (min, max) otherwise.
    edges: HashMap<(VertexId, VertexId), Label>,
    live: usize,
}

impl DataGraph {
    pub fn new(directed: bool) -> Self {
        DataGraph {
            directed,
            labels: Vec::new(),
            external: Vec::new(),
            index: HashMap::new(),
            adjacency: Vec::new(),
            by_label: Vec::new(),
            edges: HashMap::new(),
            live: 0,
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Number of live vertices.
    pub fn vertex_count(&self) -> usize {
        self.live
    }

    /// Size of the internal id space, including removed slots.
    pub fn id_bound(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_some())
            .map(|(v, _)| v as VertexId)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.labels.get(v as usize).is_some_and(Option::is_some)
    }

    pub fn label(&self, v: VertexId) -> Option<Label> {
        self.labels.get(v as usize).copied().flatten()
    }

    pub fn vertex(&self, external: u64) -> Option<VertexId> {
        self.index.get(&external).copied()
    }

    pub fn external_id(&self, v: VertexId) -> u64 {
        self.external[v as usize]
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v as usize]
    }

    pub fn neighbors_labeled(&self, v: VertexId, label: Label) -> &[VertexId] {
        self.by_label[v as usize]
            .get(&label)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v as usize].len()
    }

    fn key(&self, a: VertexId, b: VertexId) -> (VertexId, VertexId) {
        if self.directed || a < b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Label of the edge `a -> b` (or `{a, b}` when undirected).
    pub fn edge_label(&self, a: VertexId, b: VertexId) -> Option<Label> {
        self.edges.get(&self.key(a, b)).copied()
    }

    pub fn pair(&self, a: VertexId, b: VertexId) -> PairEdges {
        let forward = self.edge_label(a, b);
        let backward = if self.directed {
            self.edge_label(b, a)
        } else {
            forward
        };
        PairEdges { forward, backward }
    }

    pub fn is_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        !self.pair(a, b).is_empty()
    }

    /// All edges as `(src, dst, label)`, sorted. Undirected edges are listed
    /// once with `src < dst`.
    pub fn edges(&self) -> Vec<(VertexId, VertexId, Label)> {
        let mut out: Vec<_> = self.edges.iter().map(|(&(a, b), &l)| (a, b, l)).collect();
        out.sort_unstable();
        out
    }

    pub fn add_vertex(&mut self, external: u64, label: Label) -> Result<VertexId, GraphError> {
        if self.index.contains_key(&external) {
            return Err(GraphError::DuplicateVertex(external));
        }
        let v = self.labels.len() as VertexId;
        self.labels.push(Some(label));
        self.external.push(external);
        self.adjacency.push(Vec::new());
        self.by_label.push(BTreeMap::new());
        self.index.insert(external, v);
        self.live += 1;
        Ok(v)
    }

    pub fn remove_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        let ext = self.checked(v)?;
        if !self.adjacency[v as usize].is_empty() {
            return Err(GraphError::VertexHasEdges(ext));
        }
        self.labels[v as usize] = None;
        self.index.remove(&ext);
        self.live -= 1;
        Ok(())
    }

    fn checked(&self, v: VertexId) -> Result<u64, GraphError> {
        if self.contains(v) {
            Ok(self.external[v as usize])
        } else {
            Err(GraphError::UnknownVertex(
                self.external.get(v as usize).copied().unwrap_or(v as u64),
            ))
        }
    }

    pub fn insert_edge(&mut self, a: VertexId, b: VertexId, label: Label) -> Result<(), GraphError> {
        let ea = self.checked(a)?;
        let eb = self.checked(b)?;
        if a == b {
            return Err(GraphError::SelfLoop(ea));
        }
        let key = self.key(a, b);
        if self.edges.contains_key(&key) {
            return Err(GraphError::DuplicateEdge(ea, eb));
        }
        let was_adjacent = self.is_adjacent(a, b);
        self.edges.insert(key, label);
        if !was_adjacent {
            self.link(a, b);
            self.link(b, a);
        }
        Ok(())
    }

    pub fn delete_edge(&mut self, a: VertexId, b: VertexId) -> Result<Label, GraphError> {
        let ea = self.checked(a)?;
        let eb = self.checked(b)?;
        let key = self.key(a, b);
        let label = self
            .edges
            .remove(&key)
            .ok_or(GraphError::MissingEdge(ea, eb))?;
        if !self.is_adjacent(a, b) {
            self.unlink(a, b);
            self.unlink(b, a);
        }
        Ok(label)
    }

    fn link(&mut self, v: VertexId, w: VertexId) {
        let wl = self.labels[w as usize].expect("live vertex");
        sorted_insert(&mut self.adjacency[v as usize], w);
        sorted_insert(self.by_label[v as usize].entry(wl).or_default(), w);
    }

    fn unlink(&mut self, v: VertexId, w: VertexId) {
        let wl = self.labels[w as usize].expect("live vertex");
        sorted_remove(&mut self.adjacency[v as usize], w);
        let per_label = &mut self.by_label[v as usize];
        if let Some(list) = per_label.get_mut(&wl) {
            sorted_remove(list, w);
            if list.is_empty() {
                per_label.remove(&wl);
            }
        }
    }

    /// Applies an update given in external ids. Vertex deletion requires the
    /// vertex to be isolated already.
    pub fn apply(&mut self, op: &UpdateOp) -> Result<(), GraphError> {
        match *op {
            UpdateOp::InsertEdge { src, dst, label } => {
                let a = self.vertex(src).ok_or(GraphError::UnknownVertex(src))?;
                let b = self.vertex(dst).ok_or(GraphError::UnknownVertex(dst))?;
                self.insert_edge(a, b, label)
            }
            UpdateOp::DeleteEdge { src, dst } => {
                let a = self.vertex(src).ok_or(GraphError::UnknownVertex(src))?;
                let b = self.vertex(dst).ok_or(GraphError::UnknownVertex(dst))?;
                self.delete_edge(a, b).map(|_| ())
            }
            UpdateOp::InsertVertex { id, label } => self.add_vertex(id, label).map(|_| ()),
            UpdateOp::DeleteVertex { id } => {
                let v = self.vertex(id).ok_or(GraphError::UnknownVertex(id))?;
                self.remove_vertex(v)
            }
        }
    }
}

fn sorted_insert(list: &mut Vec<VertexId>, w: VertexId) {
    if let Err(pos) = list.binary_search(&w) {
        list.insert(pos, w);
    }
}

fn sorted_remove(list: &mut Vec<VertexId>, w: VertexId) {
    if let Ok(pos) = list.binary_search(&w) {
        list.remove(pos);
    }
}

/// A connected, immutable query graph. Query vertices are addressed by
/// `usize` indices `0..vertex_count()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryGraph {
    graph: DataGraph,
    neighbors: Vec<Vec<usize>>,
}

impl QueryGraph {
    pub fn new(graph: DataGraph) -> Result<Self, QueryError> {
        if graph.vertex_count() == 0 {
            return Err(QueryError::Empty);
        }
        if graph.id_bound() != graph.vertex_count() {
            return Err(QueryError::Tombstones);
        }
        let n = graph.vertex_count();
        let neighbors: Vec<Vec<usize>> = (0..n)
            .map(|u| graph.neighbors(u as VertexId).iter().map(|&w| w as usize).collect())
            .collect();
        let mut seen = alloc::vec![false; n];
        let mut stack = alloc::vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &neighbors[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(QueryError::Disconnected);
        }
        Ok(QueryGraph { graph, neighbors })
    }

    pub fn vertex_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn label(&self, u: usize) -> Label {
        self.graph.label(u as VertexId).expect("query vertex")
    }

    /// Neighbors of `u`, ascending, regardless of edge direction.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.neighbors[u].len()
    }

    /// Edges required between the images of `u` and `u2`.
    pub fn requirement(&self, u: usize, u2: usize) -> PairEdges {
        self.graph.pair(u as VertexId, u2 as VertexId)
    }

    pub fn external_id(&self, u: usize) -> u64 {
        self.graph.external_id(u as VertexId)
    }

    pub fn is_directed(&self) -> bool {
        self.graph.is_directed()
    }

    pub fn graph(&self) -> &DataGraph {
        &self.graph
    }

    /// Unordered adjacent pairs `(u, u2)` with `u < u2`.
    pub fn adjacent_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&w| w > u).map(move |&w| (u, w)))
    }
}
