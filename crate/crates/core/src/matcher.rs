//! Backtracking from the index edges of an update.
//!
//! Every seed edge whose endpoints both have `D2 = 1` starts a search from a
//! two-vertex partial embedding. The next query vertex is picked among the
//! extendable ones by the estimated candidate size `E(u)`, postponing
//! vertices whose candidate set can no longer shrink.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::AddAssign;

use crate::dcs::{Dcs, DcsEdge};
use crate::graph::{DataGraph, QueryGraph, VertexId};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MatchMode {
    /// Injective mappings.
    #[default]
    Iso,
    /// Homomorphisms: data vertices may repeat.
    Hom,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum OrderStrategy {
    /// Order by `E(u)`.
    #[default]
    Estimated,
    /// Order by `|C_M(u)|`, computed at every selection.
    Exact,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Postpone {
    /// Postpone extendable vertices whose neighbors are all mapped.
    #[default]
    Isolated,
    /// Postpone extendable query leaves only.
    Leaf,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct MatchConfig {
    pub mode: MatchMode,
    pub order: OrderStrategy,
    pub postpone: Postpone,
    /// Compare `|C_M(u)|` with `E(u)` for every extendable vertex at every
    /// selection. Expensive; meant for tests.
    pub check_estimates: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub seeds_started: u64,
    /// Query vertices mapped beyond the two seed vertices.
    pub extensions: u64,
    pub selections: u64,
    pub rule1_backtracks: u64,
    pub estimate_checks: u64,
    pub estimate_violations: u64,
    pub matches: u64,
}

impl AddAssign for SearchStats {
    fn add_assign(&mut self, o: SearchStats) {
        self.seeds_started += o.seeds_started;
        self.extensions += o.extensions;
        self.selections += o.selections;
        self.rule1_backtracks += o.rule1_backtracks;
        self.estimate_checks += o.estimate_checks;
        self.estimate_violations += o.estimate_violations;
        self.matches += o.matches;
    }
}

const UNSET: u32 = u32::MAX;

/// A partial mapping from query to data vertices together with the
/// estimated candidate sizes of the unmapped vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialEmbedding {
    mapping: Vec<Option<VertexId>>,
    mapped_neighbors: Vec<u32>,
    estimate: Vec<u32>,
    undo: Vec<(usize, u32)>,
    // (vertex, undo length before its update)
    frames: Vec<(usize, usize)>,
}

impl PartialEmbedding {
    pub fn new(query_vertices: usize) -> Self {
        PartialEmbedding {
            mapping: vec![None; query_vertices],
            mapped_neighbors: vec![0; query_vertices],
            estimate: vec![UNSET; query_vertices],
            undo: Vec::new(),
            frames: Vec::new(),
        }
    }

    pub fn get(&self, u: usize) -> Option<VertexId> {
        self.mapping[u]
    }

    pub fn mapping(&self) -> &[Option<VertexId>] {
        &self.mapping
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.frames.len() == self.mapping.len()
    }

    /// `E(u)`, or `None` while `u` has no mapped neighbor.
    pub fn estimate(&self, u: usize) -> Option<u32> {
        (self.estimate[u] != UNSET).then_some(self.estimate[u])
    }

    pub fn mapped_neighbors(&self, u: usize) -> usize {
        self.mapped_neighbors[u] as usize
    }

    pub fn is_extendable(&self, u: usize) -> bool {
        self.mapping[u].is_none() && self.mapped_neighbors[u] > 0
    }

    pub fn uses(&self, v: VertexId) -> bool {
        self.mapping.contains(&Some(v))
    }

    pub fn undo_depth(&self) -> usize {
        self.undo.len()
    }

    /// Maps `u` to `v` and lowers `E` of the unmapped neighbors of `u`.
    pub fn update(&mut self, q: &QueryGraph, dcs: &Dcs, u: usize, v: VertexId) {
        assert!(self.mapping[u].is_none(), "u{u} is already mapped");
        self.frames.push((u, self.undo.len()));
        self.mapping[u] = Some(v);
        for &w in q.neighbors(u) {
            self.mapped_neighbors[w] += 1;
            if self.mapping[w].is_none() {
                self.undo.push((w, self.estimate[w]));
                self.estimate[w] = self.estimate[w].min(dcs.n2(u, v, w));
            }
        }
    }

    /// Reverts the most recent [`update`](Self::update), which must have
    /// mapped `u`.
    pub fn restore(&mut self, q: &QueryGraph, u: usize) {
        let (last, depth) = self.frames.pop().expect("restore without update");
        assert_eq!(last, u, "restore out of order");
        while self.undo.len() > depth {
            let (w, old) = self.undo.pop().expect("undo entry");
            self.estimate[w] = old;
        }
        for &w in q.neighbors(u) {
            self.mapped_neighbors[w] -= 1;
        }
        self.mapping[u] = None;
    }
}

/// `C_M(u)`: candidates `v` of `u` with `D2 = 1` that are adjacent in the
/// index to the image of every mapped neighbor of `u`. Used vertices are not
/// excluded.
pub fn extendable_candidates(
    g: &DataGraph,
    q: &QueryGraph,
    dcs: &Dcs,
    m: &PartialEmbedding,
    u: usize,
    out: &mut Vec<VertexId>,
) {
    out.clear();
    let mut best: Option<(u32, usize, VertexId)> = None;
    for &w in q.neighbors(u) {
        if let Some(mv) = m.get(w) {
            let n = dcs.n2(w, mv, u);
            if best.is_none_or(|(bn, _, _)| n < bn) {
                best = Some((n, w, mv));
            }
        }
    }
    let Some((_, u_min, v_min)) = best else {
        return;
    };
    let required = dcs.requirement(u_min, u).expect("adjacent");
    'scan: for &v in g.neighbors_labeled(v_min, q.label(u)) {
        if !dcs.d2(u, v) || !g.pair(v_min, v).satisfies(required) {
            continue;
        }
        for &w in q.neighbors(u) {
            if w == u_min {
                continue;
            }
            if let Some(mv) = m.get(w) {
                if !g.pair(mv, v).satisfies(q.requirement(w, u)) {
                    continue 'scan;
                }
            }
        }
        out.push(v);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    Backtrack,
    Vertex(usize),
}

fn postponable(q: &QueryGraph, m: &PartialEmbedding, u: usize, postpone: Postpone) -> bool {
    match postpone {
        Postpone::Isolated => m.mapped_neighbors(u) == q.degree(u),
        Postpone::Leaf => q.degree(u) == 1,
    }
}

/// Picks the next vertex to extend, or signals that the current partial
/// embedding cannot be completed.
pub fn select_next_vertex(
    g: &DataGraph,
    q: &QueryGraph,
    dcs: &Dcs,
    m: &PartialEmbedding,
    cfg: &MatchConfig,
    stats: &mut SearchStats,
    scratch: &mut Vec<VertexId>,
) -> Selection {
    stats.selections += 1;
    if cfg.check_estimates {
        for u in (0..q.vertex_count()).filter(|&u| m.is_extendable(u)) {
            extendable_candidates(g, q, dcs, m, u, scratch);
            stats.estimate_checks += 1;
            if scratch.len() as u64 > u64::from(m.estimate(u).expect("extendable")) {
                stats.estimate_violations += 1;
            }
        }
    }
    // (postponed, key, u); the smallest wins
    let mut best: Option<(bool, u64, usize)> = None;
    for u in 0..q.vertex_count() {
        if !m.is_extendable(u) {
            continue;
        }
        let late = postponable(q, m, u, cfg.postpone);
        let mut size = None;
        if late {
            extendable_candidates(g, q, dcs, m, u, scratch);
            let blocked = match cfg.mode {
                MatchMode::Iso => scratch.iter().all(|&v| m.uses(v)),
                MatchMode::Hom => scratch.is_empty(),
            };
            if blocked {
                stats.rule1_backtracks += 1;
                return Selection::Backtrack;
            }
            size = Some(scratch.len() as u64);
        }
        let key = match cfg.order {
            OrderStrategy::Estimated => u64::from(m.estimate(u).expect("extendable")),
            OrderStrategy::Exact => size.unwrap_or_else(|| {
                extendable_candidates(g, q, dcs, m, u, scratch);
                scratch.len() as u64
            }),
        };
        if best.is_none_or(|b| (late, key) < (b.0, b.1)) {
            best = Some((late, key, u));
        }
    }
    match best {
        Some((_, _, u)) => Selection::Vertex(u),
        None => Selection::Backtrack,
    }
}

struct Search<'a, 's> {
    g: &'a DataGraph,
    q: &'a QueryGraph,
    dcs: &'a Dcs,
    cfg: &'a MatchConfig,
    e_dcs: &'a [DcsEdge],
    seed: usize,
    m: PartialEmbedding,
    stats: &'a mut SearchStats,
    sink: &'s mut dyn FnMut(&[VertexId]),
    out: Vec<VertexId>,
}

impl Search<'_, '_> {
    fn contains(&self, e: &DcsEdge) -> bool {
        self.m.get(e.from.u) == Some(e.from.v) && self.m.get(e.to.u) == Some(e.to.v)
    }

    fn backtrack(&mut self) {
        if self.m.is_full() {
            // report each match from the first seed edge it contains
            if self.e_dcs[..self.seed].iter().any(|e| self.contains(e)) {
                return;
            }
            self.stats.matches += 1;
            self.out.clear();
            self.out.extend(self.m.mapping().iter().map(|v| v.expect("full")));
            (self.sink)(&self.out);
            return;
        }
        let mut scratch = Vec::new();
        let u = match select_next_vertex(self.g, self.q, self.dcs, &self.m, self.cfg, self.stats, &mut scratch) {
            Selection::Backtrack => return,
            Selection::Vertex(u) => u,
        };
        extendable_candidates(self.g, self.q, self.dcs, &self.m, u, &mut scratch);
        for v in scratch {
            if self.cfg.mode == MatchMode::Iso && self.m.uses(v) {
                continue;
            }
            self.stats.extensions += 1;
            self.m.update(self.q, self.dcs, u, v);
            self.backtrack();
            self.m.restore(self.q, u);
        }
    }
}

/// Enumerates every match containing at least one edge of `e_dcs`, each
/// exactly once. Returns the number of matches reported to `sink`.
pub fn find_matches(
    g: &DataGraph,
    q: &QueryGraph,
    dcs: &Dcs,
    e_dcs: &[DcsEdge],
    cfg: &MatchConfig,
    stats: &mut SearchStats,
    sink: &mut dyn FnMut(&[VertexId]),
) -> u64 {
    let before = stats.matches;
    let mut search = Search {
        g,
        q,
        dcs,
        cfg,
        e_dcs,
        seed: 0,
        m: PartialEmbedding::new(q.vertex_count()),
        stats,
        sink,
        out: Vec::with_capacity(q.vertex_count()),
    };
    for (i, e) in e_dcs.iter().enumerate() {
        if !dcs.d2(e.from.u, e.from.v) || !dcs.d2(e.to.u, e.to.v) {
            continue;
        }
        search.stats.seeds_started += 1;
        search.seed = i;
        search.m.update(q, dcs, e.from.u, e.from.v);
        search.m.update(q, dcs, e.to.u, e.to.v);
        search.backtrack();
        search.m.restore(q, e.to.u);
        search.m.restore(q, e.from.u);
    }
    search.stats.matches - before
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dag::build_dag;
    use crate::label::Label;

    fn graph(labels: &[u32], edges: &[(u32, u32)]) -> DataGraph {
        let mut g = DataGraph::new(false);
        for (i, &l) in labels.iter().enumerate() {
            g.add_vertex(i as u64, Label(l)).unwrap();
        }
        for &(a, b) in edges {
            g.insert_edge(a, b, Label::UNLABELED).unwrap();
        }
        g
    }

    #[test]
    fn update_restore_is_identity() {
        let q = QueryGraph::new(graph(&[0, 0, 0], &[(0, 1), (1, 2), (0, 2)])).unwrap();
        let g = graph(&[0, 0, 0], &[(0, 1), (1, 2), (0, 2)]);
        let dcs = Dcs::build(&g, &q, &build_dag(&q));
        let mut m = PartialEmbedding::new(3);
        let start = m.clone();
        m.update(&q, &dcs, 0, 0);
        assert_eq!(m.estimate(1), Some(2));
        let mid = m.clone();
        m.update(&q, &dcs, 1, 1);
        assert!(m.is_extendable(2));
        m.restore(&q, 1);
        assert_eq!(m, mid);
        m.restore(&q, 0);
        assert_eq!(m, start);
    }

    #[test]
    fn triangle_third_vertex_is_isolated() {
        let q = QueryGraph::new(graph(&[0, 0, 0], &[(0, 1), (1, 2), (0, 2)])).unwrap();
        let g = graph(&[0, 0, 0], &[(0, 1), (1, 2), (0, 2)]);
        let dcs = Dcs::build(&g, &q, &build_dag(&q));
        let mut m = PartialEmbedding::new(3);
        m.update(&q, &dcs, 0, 0);
        m.update(&q, &dcs, 1, 1);
        let cfg = MatchConfig::default();
        let mut stats = SearchStats::default();
        let mut buf = Vec::new();
        assert_eq!(select_next_vertex(&g, &q, &dcs, &m, &cfg, &mut stats, &mut buf), Selection::Vertex(2));
        // map u1 onto v0's other neighbor so that u2's only candidate is used
        m.restore(&q, 1);
        m.update(&q, &dcs, 1, 2);
        extendable_candidates(&g, &q, &dcs, &m, 2, &mut buf);
        assert_eq!(buf, [1]);
    }

    #[test]
    #[should_panic(expected = "restore out of order")]
    fn restore_checks_order() {
        let q = QueryGraph::new(graph(&[0, 0], &[(0, 1)])).unwrap();
        let g = graph(&[0, 0], &[(0, 1)]);
        let dcs = Dcs::build(&g, &q, &build_dag(&q));
        let mut m = PartialEmbedding::new(2);
        m.update(&q, &dcs, 0, 0);
        m.update(&q, &dcs, 1, 1);
        m.restore(&q, 0);
    }

    #[test]
    fn rule_one_backtracks_on_used_candidate() {
        // path query A-B-A; data: one B with a single A neighbor
        let q = QueryGraph::new(graph(&[0, 1, 0], &[(0, 1), (1, 2)])).unwrap();
        let g = graph(&[0, 1], &[(0, 1)]);
        let dcs = Dcs::build(&g, &q, &build_dag(&q));
        let mut m = PartialEmbedding::new(3);
        m.update(&q, &dcs, 0, 0);
        m.update(&q, &dcs, 1, 1);
        let mut stats = SearchStats::default();
        let mut buf = Vec::new();
        let iso = MatchConfig::default();
        assert_eq!(select_next_vertex(&g, &q, &dcs, &m, &iso, &mut stats, &mut buf), Selection::Backtrack);
        assert_eq!(stats.rule1_backtracks, 1);
        let hom = MatchConfig { mode: MatchMode::Hom, ..iso };
        assert_eq!(select_next_vertex(&g, &q, &dcs, &m, &hom, &mut stats, &mut buf), Selection::Vertex(2));
    }
}
