//! Dynamic candidate space.
//!
//! For every query vertex `u` the candidate set `C(u)` holds the data vertices
//! carrying `u`'s label. A candidate pair `<u, v>` keeps:
//!
//! * `D1`: a weak embedding of the reversed sub-DAG rooted at `u` exists at `v`
//!   (top-down over the query DAG),
//! * `D2`: `D1` holds and a weak embedding of the sub-DAG rooted at `u` exists
//!   at `v` using only pairs with `D1 = 1` (bottom-up),
//! * `N1[up]`: adjacent candidates of parent `up` with `D1 = 1`, and `N1P`,
//!   the number of parents with a non-zero `N1`,
//! * `N2[u']`: adjacent candidates of neighbor `u'` with `D2 = 1`, and `N2C`,
//!   the number of children with a non-zero `N2`.
//!
//! Index edges are never stored. `<u, v>` and `<u', v'>` are adjacent when
//! `u` and `u'` are adjacent in the query and the data edges between `v` and
//! `v'` cover the query edges between `u` and `u'` (labels and directions
//! included). They are enumerated on demand through the label-partitioned
//! adjacency of the data graph.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::dag::QueryDag;
use crate::graph::{DataGraph, PairEdges, QueryGraph, VertexId};
use crate::label::Label;

const NO_SLOT: u32 = u32::MAX;
const NO_POS: usize = usize::MAX;

/// A candidate pair `<u, v>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub u: usize,
    pub v: VertexId,
}

impl Cell {
    pub fn new(u: usize, v: VertexId) -> Self {
        Cell { u, v }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<u{},v{}>", self.u, self.v)
    }
}

/// An edge of the candidate space, as produced by [`dcs_changed_edges`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DcsEdge {
    pub from: Cell,
    pub to: Cell,
}

impl DcsEdge {
    pub fn new(from: Cell, to: Cell) -> Self {
        DcsEdge { from, to }
    }

    fn joins(&self, a: Cell, b: Cell) -> bool {
        (self.from == a && self.to == b) || (self.from == b && self.to == a)
    }
}

/// A single data-edge update, in internal ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeChange {
    pub src: VertexId,
    pub dst: VertexId,
    pub label: Label,
    pub insert: bool,
}

/// Per-operation maintenance counters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UpdateStats {
    /// Pairs whose `D1` or `D2` flipped.
    pub updated_vertices: usize,
    /// Index edges traversed: one per seed edge plus every neighbor examined
    /// while draining the two queues.
    pub visited_edges: usize,
    pub e_dcs_size: usize,
    /// The flipped pairs, sorted and deduplicated.
    pub updated: Vec<Cell>,
}

impl UpdateStats {
    pub fn reset(&mut self) {
        self.updated_vertices = 0;
        self.visited_edges = 0;
        self.e_dcs_size = 0;
        self.updated.clear();
    }
}

/// Index edges whose existence flips when `change` is applied to `g`.
///
/// Must be called before an insertion is applied and before a deletion is
/// applied. Each query edge `{u, u'}` (with `u < u'`) is tried against both
/// orientations of the data edge, `(<u,src>, <u',dst>)` first.
pub fn dcs_changed_edges(g: &DataGraph, q: &QueryGraph, change: EdgeChange) -> Vec<DcsEdge> {
    let (a, b) = (change.src, change.dst);
    let (Some(la), Some(lb)) = (g.label(a), g.label(b)) else {
        return Vec::new();
    };
    let before = g.pair(a, b);
    let after = {
        let mut p = before;
        let new = if change.insert { Some(change.label) } else { None };
        p.forward = new;
        if !g.is_directed() {
            p.backward = new;
        }
        p
    };
    let mut out = Vec::new();
    for (u, u2) in q.adjacent_pairs() {
        let req = q.requirement(u, u2);
        for (x, lx, y, ly, pre, post) in [
            (a, la, b, lb, before, after),
            (b, lb, a, la, before.reversed(), after.reversed()),
        ] {
            if q.label(u) == lx && q.label(u2) == ly && pre.satisfies(req) != post.satisfies(req) {
                out.push(DcsEdge::new(Cell::new(u, x), Cell::new(u2, y)));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Neighbor {
    vertex: usize,
    // Index into the parent list when `vertex` is a parent.
    parent_slot: Option<usize>,
    required: PairEdges,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct QueryVertex {
    label: Label,
    parents: Vec<usize>,
    children: Vec<usize>,
    neighbors: Vec<Neighbor>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Cells {
    d1: Vec<bool>,
    d2: Vec<bool>,
    // slot * |Parent(u)| + parent index
    n1: Vec<u32>,
    n1p: Vec<u32>,
    // slot * |Nbr(u)| + neighbor index
    n2: Vec<u32>,
    n2c: Vec<u32>,
}

impl Cells {
    fn push_fresh(&mut self, parents: usize, neighbors: usize, d1: bool, d2: bool) {
        self.d1.push(d1);
        self.d2.push(d2);
        self.n1.extend(core::iter::repeat_n(0, parents));
        self.n1p.push(0);
        self.n2.extend(core::iter::repeat_n(0, neighbors));
        self.n2c.push(0);
    }

    fn remove_slot(&mut self, k: usize, parents: usize, neighbors: usize) {
        self.d1.remove(k);
        self.d2.remove(k);
        self.n1.drain(k * parents..(k + 1) * parents);
        self.n1p.remove(k);
        self.n2.drain(k * neighbors..(k + 1) * neighbors);
        self.n2c.remove(k);
    }
}

/// Index edges of the current operation that must be hidden from, or added
/// to, the neighborhoods read from the data graph.
#[derive(Clone, Copy)]
enum Pending<'e> {
    None,
    Exclude(&'e [DcsEdge]),
    Include(&'e [DcsEdge]),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dcs {
    query: Vec<QueryVertex>,
    // position of u2 in query[u].neighbors, NO_POS if not adjacent
    neighbor_pos: Vec<Vec<usize>>,
    topo: Vec<usize>,
    // rank of each data vertex inside its label class
    slot: Vec<u32>,
    classes: BTreeMap<Label, Vec<VertexId>>,
    cells: Vec<Cells>,
}

struct Queues {
    q1: VecDeque<Cell>,
    q2: VecDeque<Cell>,
    flipped: Vec<Cell>,
}

impl Dcs {
    /// Builds the index from scratch: `D1` top-down in topological order,
    /// `D2` bottom-up in reverse, then the `N2` counters towards parents.
    pub fn build(g: &DataGraph, q: &QueryGraph, dag: &QueryDag) -> Dcs {
        let n = q.vertex_count();
        let mut neighbor_pos = vec![vec![NO_POS; n]; n];
        let query: Vec<QueryVertex> = (0..n)
            .map(|u| {
                let parents = dag.parents(u).to_vec();
                let neighbors: Vec<Neighbor> = q
                    .neighbors(u)
                    .iter()
                    .enumerate()
                    .map(|(i, &w)| {
                        neighbor_pos[u][w] = i;
                        Neighbor {
                            vertex: w,
                            parent_slot: parents.iter().position(|&p| p == w),
                            required: q.requirement(u, w),
                        }
                    })
                    .collect();
                QueryVertex {
                    label: q.label(u),
                    parents,
                    children: dag.children(u).to_vec(),
                    neighbors,
                }
            })
            .collect();

        let mut classes: BTreeMap<Label, Vec<VertexId>> =
            query.iter().map(|qv| (qv.label, Vec::new())).collect();
        let mut slot = vec![NO_SLOT; g.id_bound()];
        for v in g.vertices() {
            if let Some(members) = classes.get_mut(&g.label(v).expect("live")) {
                slot[v as usize] = members.len() as u32;
                members.push(v);
            }
        }

        let cells = query
            .iter()
            .map(|qv| {
                let size = classes[&qv.label].len();
                Cells {
                    d1: vec![false; size],
                    d2: vec![false; size],
                    n1: vec![0; size * qv.parents.len()],
                    n1p: vec![0; size],
                    n2: vec![0; size * qv.neighbors.len()],
                    n2c: vec![0; size],
                }
            })
            .collect();

        let mut dcs = Dcs {
            query,
            neighbor_pos,
            topo: dag.topological_order().to_vec(),
            slot,
            classes,
            cells,
        };
        dcs.compute(g);
        dcs
    }

    fn compute(&mut self, g: &DataGraph) {
        let mut buf = Vec::new();
        let topo = self.topo.clone();
        for &u in &topo {
            let np = self.query[u].parents.len();
            for k in 0..self.class_of(u).len() {
                let v = self.class_of(u)[k];
                let mut nonzero = 0;
                for pi in 0..np {
                    let p = self.query[u].parents[pi];
                    self.neighbors_into(g, Cell::new(u, v), p, Pending::None, &mut buf);
                    let count = buf.iter().filter(|&&w| self.d1(p, w)).count() as u32;
                    self.cells[u].n1[k * np + pi] = count;
                    nonzero += (count > 0) as u32;
                }
                self.cells[u].n1p[k] = nonzero;
                self.cells[u].d1[k] = nonzero as usize == np;
            }
        }
        for &u in topo.iter().rev() {
            let nn = self.query[u].neighbors.len();
            let nc = self.query[u].children.len();
            for k in 0..self.class_of(u).len() {
                let v = self.class_of(u)[k];
                let mut nonzero = 0;
                for ci in 0..nc {
                    let c = self.query[u].children[ci];
                    self.neighbors_into(g, Cell::new(u, v), c, Pending::None, &mut buf);
                    let count = buf.iter().filter(|&&w| self.d2(c, w)).count() as u32;
                    self.cells[u].n2[k * nn + self.neighbor_pos[u][c]] = count;
                    nonzero += (count > 0) as u32;
                }
                self.cells[u].n2c[k] = nonzero;
                self.cells[u].d2[k] = self.cells[u].d1[k] && nonzero as usize == nc;
            }
        }
        for &u in &topo {
            let nn = self.query[u].neighbors.len();
            for k in 0..self.class_of(u).len() {
                let v = self.class_of(u)[k];
                for pi in 0..self.query[u].parents.len() {
                    let p = self.query[u].parents[pi];
                    self.neighbors_into(g, Cell::new(u, v), p, Pending::None, &mut buf);
                    let count = buf.iter().filter(|&&w| self.d2(p, w)).count() as u32;
                    self.cells[u].n2[k * nn + self.neighbor_pos[u][p]] = count;
                }
            }
        }
    }

    fn class_of(&self, u: usize) -> &[VertexId] {
        &self.classes[&self.query[u].label]
    }

    /// `C(u)`, ascending.
    pub fn candidates(&self, u: usize) -> &[VertexId] {
        self.class_of(u)
    }

    pub fn query_vertex_count(&self) -> usize {
        self.query.len()
    }

    #[inline]
    fn slot_of(&self, u: usize, v: VertexId) -> Option<usize> {
        let s = *self.slot.get(v as usize)?;
        if s == NO_SLOT {
            return None;
        }
        // slots are per label class; check the class matches u's label
        let members = self.class_of(u);
        (members.get(s as usize) == Some(&v)).then_some(s as usize)
    }

    pub fn is_candidate(&self, u: usize, v: VertexId) -> bool {
        self.slot_of(u, v).is_some()
    }

    #[inline]
    pub fn d1(&self, u: usize, v: VertexId) -> bool {
        self.slot_of(u, v).is_some_and(|k| self.cells[u].d1[k])
    }

    #[inline]
    pub fn d2(&self, u: usize, v: VertexId) -> bool {
        self.slot_of(u, v).is_some_and(|k| self.cells[u].d2[k])
    }

    /// `N1[u,v][parent]`; zero for non-candidates.
    pub fn n1(&self, u: usize, v: VertexId, parent: usize) -> u32 {
        let np = self.query[u].parents.len();
        let pi = self.query[u].parents.iter().position(|&p| p == parent);
        match (self.slot_of(u, v), pi) {
            (Some(k), Some(pi)) => self.cells[u].n1[k * np + pi],
            _ => 0,
        }
    }

    pub fn n1p(&self, u: usize, v: VertexId) -> u32 {
        self.slot_of(u, v).map_or(0, |k| self.cells[u].n1p[k])
    }

    /// `N2[u,v][neighbor]`; zero for non-candidates and non-neighbors.
    #[inline]
    pub fn n2(&self, u: usize, v: VertexId, neighbor: usize) -> u32 {
        let pos = self.neighbor_pos[u][neighbor];
        match self.slot_of(u, v) {
            Some(k) if pos != NO_POS => self.cells[u].n2[k * self.query[u].neighbors.len() + pos],
            _ => 0,
        }
    }

    pub fn n2c(&self, u: usize, v: VertexId) -> u32 {
        self.slot_of(u, v).map_or(0, |k| self.cells[u].n2c[k])
    }

    /// Number of stored counter entries across `N1`, `N1P`, `N2` and `N2C`.
    pub fn counter_entries(&self) -> usize {
        self.cells
            .iter()
            .map(|c| c.n1.len() + c.n1p.len() + c.n2.len() + c.n2c.len())
            .sum()
    }

    /// Edges the data graph must have between the images of `u` and `u2`.
    pub fn requirement(&self, u: usize, u2: usize) -> Option<PairEdges> {
        let pos = self.neighbor_pos[u][u2];
        (pos != NO_POS).then(|| self.query[u].neighbors[pos].required)
    }

    /// Appends to `out` the candidates `w` of `toward` adjacent to `cell` in
    /// the index. `toward` must be a query neighbor of `cell.u`.
    fn neighbors_into(
        &self,
        g: &DataGraph,
        cell: Cell,
        toward: usize,
        pending: Pending<'_>,
        out: &mut Vec<VertexId>,
    ) {
        out.clear();
        let required = self.query[cell.u].neighbors[self.neighbor_pos[cell.u][toward]].required;
        let label = self.query[toward].label;
        for &w in g.neighbors_labeled(cell.v, label) {
            if g.pair(cell.v, w).satisfies(required) {
                out.push(w);
            }
        }
        match pending {
            Pending::None => {}
            Pending::Exclude(edges) => {
                out.retain(|&w| !edges.iter().any(|e| e.joins(cell, Cell::new(toward, w))));
            }
            Pending::Include(edges) => {
                for e in edges {
                    let other = if e.from == cell {
                        e.to
                    } else if e.to == cell {
                        e.from
                    } else {
                        continue;
                    };
                    if other.u == toward && !out.contains(&other.v) {
                        out.push(other.v);
                    }
                }
            }
        }
    }

    /// Index neighbors of `cell` in candidate set of `toward`.
    pub fn neighbors(&self, g: &DataGraph, cell: Cell, toward: usize) -> Vec<VertexId> {
        let mut out = Vec::new();
        if self.neighbor_pos[cell.u][toward] != NO_POS {
            self.neighbors_into(g, cell, toward, Pending::None, &mut out);
        }
        out
    }

    /// Number of index edges incident to `cell`.
    pub fn degree(&self, g: &DataGraph, cell: Cell) -> usize {
        let mut buf = Vec::new();
        self.query[cell.u]
            .neighbors
            .iter()
            .map(|nb| {
                self.neighbors_into(g, cell, nb.vertex, Pending::None, &mut buf);
                buf.len()
            })
            .sum()
    }

    fn is_parent(&self, parent: usize, child: usize) -> bool {
        self.query[child].parents.contains(&parent)
    }

    fn orient(&self, e: &DcsEdge) -> (Cell, Cell) {
        if self.is_parent(e.from.u, e.to.u) {
            (e.from, e.to)
        } else {
            (e.to, e.from)
        }
    }

    fn slot(&self, c: Cell) -> usize {
        self.slot_of(c.u, c.v).expect("cell is a candidate pair")
    }

    // `parent` became an updated parent of `child`.
    fn top_down_inc(&mut self, parent: Cell, child: Cell, qs: &mut Queues) {
        let k = self.slot(child);
        let qv = &self.query[child.u];
        let (np, nc) = (qv.parents.len(), qv.children.len());
        let pi = qv.neighbors[self.neighbor_pos[child.u][parent.u]]
            .parent_slot
            .expect("parent");
        let cells = &mut self.cells[child.u];
        if cells.n1[k * np + pi] == 0 {
            cells.n1p[k] += 1;
            if cells.n1p[k] as usize == np {
                cells.d1[k] = true;
                qs.q1.push_back(child);
                qs.flipped.push(child);
                if cells.n2c[k] as usize == nc {
                    cells.d2[k] = true;
                    qs.q2.push_back(child);
                }
            }
        }
        let n1 = &mut cells.n1[k * np + pi];
        *n1 = n1.checked_add(1).expect("N1 counter overflow");
    }

    // `child` became an updated child of `parent`.
    fn bottom_up_inc(&mut self, child: Cell, parent: Cell, qs: &mut Queues) {
        let k = self.slot(parent);
        let qv = &self.query[parent.u];
        let (nn, nc) = (qv.neighbors.len(), qv.children.len());
        let idx = k * nn + self.neighbor_pos[parent.u][child.u];
        let cells = &mut self.cells[parent.u];
        if cells.n2[idx] == 0 {
            cells.n2c[k] += 1;
            if cells.d1[k] && cells.n2c[k] as usize == nc {
                cells.d2[k] = true;
                qs.q2.push_back(parent);
                qs.flipped.push(parent);
            }
        }
        cells.n2[idx] = cells.n2[idx].checked_add(1).expect("N2 counter overflow");
    }

    fn top_down_dec(&mut self, parent: Cell, child: Cell, qs: &mut Queues) {
        let k = self.slot(child);
        let qv = &self.query[child.u];
        let np = qv.parents.len();
        let pi = qv.neighbors[self.neighbor_pos[child.u][parent.u]]
            .parent_slot
            .expect("parent");
        let cells = &mut self.cells[child.u];
        let n1 = &mut cells.n1[k * np + pi];
        *n1 = n1.checked_sub(1).expect("N1 counter underflow");
        if *n1 == 0 {
            if cells.d1[k] {
                cells.d1[k] = false;
                qs.q1.push_back(child);
                qs.flipped.push(child);
                if cells.d2[k] {
                    cells.d2[k] = false;
                    qs.q2.push_back(child);
                }
            }
            cells.n1p[k] = cells.n1p[k].checked_sub(1).expect("N1P counter underflow");
        }
    }

    fn bottom_up_dec(&mut self, child: Cell, parent: Cell, qs: &mut Queues) {
        let k = self.slot(parent);
        let nn = self.query[parent.u].neighbors.len();
        let idx = k * nn + self.neighbor_pos[parent.u][child.u];
        let cells = &mut self.cells[parent.u];
        cells.n2[idx] = cells.n2[idx].checked_sub(1).expect("N2 counter underflow");
        if cells.n2[idx] == 0 {
            if cells.d2[k] {
                cells.d2[k] = false;
                qs.q2.push_back(parent);
                qs.flipped.push(parent);
            }
            cells.n2c[k] = cells.n2c[k].checked_sub(1).expect("N2C counter underflow");
        }
    }

    // N2[target][from_u] where from_u is a parent of target.u; N2C is
    // unaffected since it only counts children.
    fn bump_n2(&mut self, target: Cell, from_u: usize, up: bool) {
        let k = self.slot(target);
        let nn = self.query[target.u].neighbors.len();
        let idx = k * nn + self.neighbor_pos[target.u][from_u];
        let c = &mut self.cells[target.u].n2[idx];
        *c = if up {
            c.checked_add(1).expect("N2 counter overflow")
        } else {
            c.checked_sub(1).expect("N2 counter underflow")
        };
    }

    /// Applies the index edges `e_dcs` of an edge insertion. The data graph
    /// must already contain the new edge.
    pub fn insertion_update(&mut self, g: &DataGraph, e_dcs: &[DcsEdge], stats: &mut UpdateStats) {
        self.update(g, e_dcs, stats, true);
    }

    /// Removes the index edges `e_dcs` of an edge deletion. The data graph
    /// must no longer contain the deleted edge.
    pub fn deletion_update(&mut self, g: &DataGraph, e_dcs: &[DcsEdge], stats: &mut UpdateStats) {
        self.update(g, e_dcs, stats, false);
    }

    fn update(&mut self, g: &DataGraph, e_dcs: &[DcsEdge], stats: &mut UpdateStats, insert: bool) {
        stats.reset();
        stats.e_dcs_size = e_dcs.len();
        stats.visited_edges = e_dcs.len();
        let mut qs = Queues {
            q1: VecDeque::new(),
            q2: VecDeque::new(),
            flipped: Vec::new(),
        };
        let mut buf = Vec::new();
        for (i, edge) in e_dcs.iter().enumerate() {
            let (p, c) = self.orient(edge);
            // Edges after `i` are not yet part of the index (insertion) or
            // still are (deletion); the data graph already reflects all of
            // them.
            let pending = if insert {
                Pending::Exclude(&e_dcs[i + 1..])
            } else {
                Pending::Include(&e_dcs[i + 1..])
            };
            // Evaluate all three guards before acting on any of them: a flag
            // set below is propagated across this edge by the queue drain.
            let (p_d1, c_d2, p_d2) = (self.d1(p.u, p.v), self.d2(c.u, c.v), self.d2(p.u, p.v));
            if insert {
                if p_d1 {
                    self.top_down_inc(p, c, &mut qs);
                }
                if c_d2 {
                    self.bottom_up_inc(c, p, &mut qs);
                }
                if p_d2 {
                    self.bump_n2(c, p.u, true);
                }
            } else {
                if p_d1 {
                    self.top_down_dec(p, c, &mut qs);
                }
                if c_d2 {
                    self.bottom_up_dec(c, p, &mut qs);
                }
                if p_d2 {
                    self.bump_n2(c, p.u, false);
                }
            }

            while let Some(x) = qs.q1.pop_front() {
                for ci in 0..self.query[x.u].children.len() {
                    let uc = self.query[x.u].children[ci];
                    self.neighbors_into(g, x, uc, pending, &mut buf);
                    stats.visited_edges += buf.len();
                    for &w in &buf {
                        if insert {
                            self.top_down_inc(x, Cell::new(uc, w), &mut qs);
                        } else {
                            self.top_down_dec(x, Cell::new(uc, w), &mut qs);
                        }
                    }
                }
            }
            while let Some(x) = qs.q2.pop_front() {
                for pi in 0..self.query[x.u].parents.len() {
                    let up = self.query[x.u].parents[pi];
                    self.neighbors_into(g, x, up, pending, &mut buf);
                    stats.visited_edges += buf.len();
                    for &w in &buf {
                        if insert {
                            self.bottom_up_inc(x, Cell::new(up, w), &mut qs);
                        } else {
                            self.bottom_up_dec(x, Cell::new(up, w), &mut qs);
                        }
                    }
                }
                for ci in 0..self.query[x.u].children.len() {
                    let uc = self.query[x.u].children[ci];
                    self.neighbors_into(g, x, uc, pending, &mut buf);
                    stats.visited_edges += buf.len();
                    for &w in &buf {
                        self.bump_n2(Cell::new(uc, w), x.u, insert);
                    }
                }
            }
        }
        qs.flipped.sort_unstable();
        qs.flipped.dedup();
        stats.updated_vertices = qs.flipped.len();
        stats.updated = qs.flipped;
    }

    /// Registers a freshly inserted, isolated data vertex.
    pub fn add_vertex(&mut self, g: &DataGraph, v: VertexId) {
        self.slot.resize(g.id_bound(), NO_SLOT);
        let label = g.label(v).expect("live vertex");
        let Some(members) = self.classes.get_mut(&label) else {
            return;
        };
        debug_assert!(members.last().is_none_or(|&last| last < v));
        self.slot[v as usize] = members.len() as u32;
        members.push(v);
        for (qv, cells) in self.query.iter().zip(self.cells.iter_mut()) {
            if qv.label == label {
                let d1 = qv.parents.is_empty();
                let d2 = d1 && qv.children.is_empty();
                cells.push_fresh(qv.parents.len(), qv.neighbors.len(), d1, d2);
            }
        }
    }

    /// Drops an isolated data vertex from every candidate set.
    pub fn remove_vertex(&mut self, v: VertexId, label: Label) {
        let Some(members) = self.classes.get_mut(&label) else {
            return;
        };
        let k = self.slot[v as usize] as usize;
        members.remove(k);
        for &w in &members[k..] {
            self.slot[w as usize] -= 1;
        }
        self.slot[v as usize] = NO_SLOT;
        for (qv, cells) in self.query.iter().zip(self.cells.iter_mut()) {
            if qv.label == label {
                cells.remove_slot(k, qv.parents.len(), qv.neighbors.len());
            }
        }
    }

    /// First differing entry between two indexes over the same query, for
    /// test diagnostics.
    pub fn first_difference(&self, other: &Dcs) -> Option<String> {
        if self.query != other.query {
            return Some("different query layout".into());
        }
        for u in 0..self.query.len() {
            if self.class_of(u) != other.class_of(u) {
                return Some(format!("C(u{u}) differs"));
            }
            for &v in self.class_of(u) {
                let c = Cell::new(u, v);
                if self.d1(u, v) != other.d1(u, v) {
                    return Some(format!("D1{c}: {} vs {}", self.d1(u, v), other.d1(u, v)));
                }
                if self.d2(u, v) != other.d2(u, v) {
                    return Some(format!("D2{c}: {} vs {}", self.d2(u, v), other.d2(u, v)));
                }
                if self.n1p(u, v) != other.n1p(u, v) {
                    return Some(format!("N1P{c}: {} vs {}", self.n1p(u, v), other.n1p(u, v)));
                }
                if self.n2c(u, v) != other.n2c(u, v) {
                    return Some(format!("N2C{c}: {} vs {}", self.n2c(u, v), other.n2c(u, v)));
                }
                for &p in &self.query[u].parents {
                    let (a, b) = (self.n1(u, v, p), other.n1(u, v, p));
                    if a != b {
                        return Some(format!("N1{c}[u{p}]: {a} vs {b}"));
                    }
                }
                for nb in &self.query[u].neighbors {
                    let (a, b) = (self.n2(u, v, nb.vertex), other.n2(u, v, nb.vertex));
                    if a != b {
                        return Some(format!("N2{c}[u{}]: {a} vs {b}", nb.vertex));
                    }
                }
            }
        }
        (self != other).then(|| "internal layout differs".into())
    }
}
