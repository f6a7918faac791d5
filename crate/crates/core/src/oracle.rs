//! Brute-force reference enumeration.
//!
//! Plain backtracking over query vertices in index order with no filtering.
//! Only meant for small instances; the size guard is enforced.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::{DataGraph, GraphError, QueryGraph, VertexId};
use crate::matcher::MatchMode;
use crate::update::UpdateOp;

/// Complete mappings, each listed in query-vertex order.
pub type EmbeddingSet = BTreeSet<Vec<VertexId>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_query_vertices: usize,
    pub max_data_vertices: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_query_vertices: 8,
            max_data_vertices: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("query has {0} vertices, above the oracle limit")]
    QueryTooLarge(usize),
    #[error("data graph has {0} vertices, above the oracle limit")]
    DataTooLarge(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn check(q: &QueryGraph, g: &DataGraph, limits: OracleLimits) -> Result<(), OracleError> {
    if q.vertex_count() > limits.max_query_vertices {
        return Err(OracleError::QueryTooLarge(q.vertex_count()));
    }
    if g.vertex_count() > limits.max_data_vertices {
        return Err(OracleError::DataTooLarge(g.vertex_count()));
    }
    Ok(())
}

// Candidates are tried in increasing id order, so embeddings come out
// sorted; they are stored back to back in `out`.
fn extend(q: &QueryGraph, g: &DataGraph, mode: MatchMode, m: &mut Vec<VertexId>, out: &mut Vec<VertexId>) {
    let u = m.len();
    if u == q.vertex_count() {
        out.extend_from_slice(m);
        return;
    }
    for v in g.vertices() {
        if g.label(v) != Some(q.label(u)) {
            continue;
        }
        if mode == MatchMode::Iso && m.contains(&v) {
            continue;
        }
        let fits = q
            .neighbors(u)
            .iter()
            .filter(|&&w| w < u)
            .all(|&w| g.pair(m[w], v).satisfies(q.requirement(w, u)));
        if fits {
            m.push(v);
            extend(q, g, mode, m, out);
            m.pop();
        }
    }
}

fn enumerate_flat(q: &QueryGraph, g: &DataGraph, mode: MatchMode) -> Vec<VertexId> {
    let mut out = Vec::new();
    extend(q, g, mode, &mut Vec::with_capacity(q.vertex_count()), &mut out);
    out
}

// Embeddings of sorted flat `a` missing from sorted flat `b`.
fn difference(a: &[VertexId], b: &[VertexId], k: usize) -> EmbeddingSet {
    let mut rest = b.chunks_exact(k).peekable();
    let mut out = Vec::new();
    for m in a.chunks_exact(k) {
        while rest.next_if(|r| *r < m).is_some() {}
        if rest.next_if(|r| *r == m).is_none() {
            out.push(m.to_vec());
        }
    }
    out.into_iter().collect()
}

/// All embeddings (or homomorphisms) of `q` in `g`.
pub fn enumerate_embeddings(
    q: &QueryGraph,
    g: &DataGraph,
    mode: MatchMode,
    limits: OracleLimits,
) -> Result<EmbeddingSet, OracleError> {
    check(q, g, limits)?;
    let k = q.vertex_count();
    Ok(enumerate_flat(q, g, mode).chunks_exact(k).map(<[VertexId]>::to_vec).collect())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Delta {
    pub positive: EmbeddingSet,
    pub negative: EmbeddingSet,
}

// Some query edge `u -> w` lands on `a -> b`. Undirected query edges are
// seen from both endpoints.
fn uses_edge(q: &QueryGraph, m: &[VertexId], a: VertexId, b: VertexId) -> bool {
    (0..q.vertex_count()).any(|u| {
        q.neighbors(u)
            .iter()
            .any(|&w| m[u] == a && m[w] == b && q.requirement(u, w).forward.is_some())
    })
}

/// Matches created and destroyed by applying `op` to `g`. A vertex deletion
/// also removes the incident edges.
///
/// Panics if an edge insertion destroys a match or an edge deletion creates
/// one, or if the delta differs from the matches that contain the updated
/// edge.
pub fn delta_matches(
    q: &QueryGraph,
    g: &DataGraph,
    op: &UpdateOp,
    mode: MatchMode,
    limits: OracleLimits,
) -> Result<Delta, OracleError> {
    let mut after = g.clone();
    if let UpdateOp::DeleteVertex { id } = *op {
        // incident edges go first
        let v = after.vertex(id).ok_or(GraphError::UnknownVertex(id))?;
        for w in after.neighbors(v).to_vec() {
            for (a, b) in [(v, w), (w, v)] {
                if after.edge_label(a, b).is_some() {
                    after.delete_edge(a, b)?;
                }
            }
        }
    }
    after.apply(op)?;
    check(q, &after, limits)?;
    check(q, g, limits)?;
    let k = q.vertex_count();
    let pre = enumerate_flat(q, g, mode);
    let post = enumerate_flat(q, &after, mode);
    let delta = Delta {
        positive: difference(&post, &pre, k),
        negative: difference(&pre, &post, k),
    };
    let edge = match *op {
        UpdateOp::InsertEdge { src, dst, .. } => Some((src, dst, &post, &delta.positive, &delta.negative)),
        UpdateOp::DeleteEdge { src, dst } => Some((src, dst, &pre, &delta.negative, &delta.positive)),
        _ => None,
    };
    if let Some((src, dst, side, changed, other)) = edge {
        assert!(other.is_empty(), "edge update changed matches in the wrong direction");
        let (a, b) = (g.vertex(src).expect("src"), g.vertex(dst).expect("dst"));
        let containing: EmbeddingSet = side
            .chunks_exact(k)
            .filter(|m| uses_edge(q, m, a, b))
            .map(<[VertexId]>::to_vec)
            .collect();
        assert_eq!(&containing, changed, "delta differs from matches containing the edge");
    }
    Ok(delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label;
    use alloc::vec;

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
    fn triangle_in_triangle() {
        let t = graph(&[0, 0, 0], &[(0, 1), (1, 2), (0, 2)]);
        let q = QueryGraph::new(t.clone()).unwrap();
        let all = enumerate_embeddings(&q, &t, MatchMode::Iso, OracleLimits::default()).unwrap();
        assert_eq!(all.len(), 6);
    }

    #[test]
    fn missing_label_gives_nothing() {
        let q = QueryGraph::new(graph(&[0, 1], &[(0, 1)])).unwrap();
        let g = graph(&[0, 0], &[(0, 1)]);
        assert!(enumerate_embeddings(&q, &g, MatchMode::Hom, OracleLimits::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn hom_allows_repeats() {
        // path A-B-A onto a single A-B edge
        let q = QueryGraph::new(graph(&[0, 1, 0], &[(0, 1), (1, 2)])).unwrap();
        let g = graph(&[0, 1], &[(0, 1)]);
        let lim = OracleLimits::default();
        assert!(enumerate_embeddings(&q, &g, MatchMode::Iso, lim).unwrap().is_empty());
        assert_eq!(
            enumerate_embeddings(&q, &g, MatchMode::Hom, lim).unwrap(),
            EmbeddingSet::from([vec![0, 1, 0]])
        );
    }

    #[test]
    fn size_guard() {
        let q = QueryGraph::new(graph(&[0; 9], &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)]))
            .unwrap();
        let g = graph(&[0], &[]);
        assert_eq!(
            enumerate_embeddings(&q, &g, MatchMode::Iso, OracleLimits::default()),
            Err(OracleError::QueryTooLarge(9))
        );
    }

    #[test]
    fn insert_then_delete_is_symmetric() {
        let q = QueryGraph::new(graph(&[0, 1, 2], &[(0, 1), (1, 2)])).unwrap();
        let mut g = graph(&[0, 1, 2, 2], &[(0, 1), (1, 3)]);
        let lim = OracleLimits::default();
        let ins = UpdateOp::InsertEdge { src: 1, dst: 2, label: Label::UNLABELED };
        let d = delta_matches(&q, &g, &ins, MatchMode::Iso, lim).unwrap();
        assert_eq!(d.positive, EmbeddingSet::from([vec![0, 1, 2]]));
        g.apply(&ins).unwrap();
        let del = UpdateOp::DeleteEdge { src: 2, dst: 1 };
        let back = delta_matches(&q, &g, &del, MatchMode::Iso, lim).unwrap();
        assert_eq!(back.negative, d.positive);
        assert!(back.positive.is_empty());
    }
}
