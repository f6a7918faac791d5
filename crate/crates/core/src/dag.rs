//! Rooted query DAG.
//!
//! The query is traversed breadth-first from a root and every edge is directed
//! from the earlier visited endpoint to the later one. The root is the vertex
//! whose BFS tree is deepest; ties go to the smallest vertex index, and
//! neighbors are visited in ascending order.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::QueryGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DagError {
    #[error("query vertex {0} does not exist")]
    UnknownRoot(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryDag {
    root: usize,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    topo: Vec<usize>,
    depth: Vec<usize>,
}

struct Bfs {
    order: Vec<usize>,
    depth: Vec<usize>,
}

fn bfs(q: &QueryGraph, root: usize) -> Bfs {
    let n = q.vertex_count();
    let mut depth = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    depth[root] = 0;
    queue.push_back(root);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in q.neighbors(u) {
            if depth[w] == usize::MAX {
                depth[w] = depth[u] + 1;
                queue.push_back(w);
            }
        }
    }
    Bfs { order, depth }
}

/// Maximum BFS depth reached from `root`.
pub fn dag_height(q: &QueryGraph, root: usize) -> Result<usize, DagError> {
    if root >= q.vertex_count() {
        return Err(DagError::UnknownRoot(root));
    }
    Ok(bfs(q, root).depth.into_iter().max().unwrap_or(0))
}

pub fn build_dag(q: &QueryGraph) -> QueryDag {
    let n = q.vertex_count();
    let mut root = 0;
    let mut best = 0;
    for u in 0..n {
        let h = dag_height(q, u).expect("vertex in range");
        if h > best {
            best = h;
            root = u;
        }
    }
    QueryDag::rooted_at(q, root)
}

impl QueryDag {
    /// DAG obtained by BFS from an explicit root.
    pub fn rooted_at(q: &QueryGraph, root: usize) -> QueryDag {
        let n = q.vertex_count();
        let Bfs { order, depth } = bfs(q, root);
        let mut rank = vec![0; n];
        for (i, &u) in order.iter().enumerate() {
            rank[u] = i;
        }
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for u in 0..n {
            for &w in q.neighbors(u) {
                if rank[u] < rank[w] {
                    children[u].push(w);
                } else {
                    parents[u].push(w);
                }
            }
        }
        QueryDag {
            root,
            parents,
            children,
            topo: order,
            depth,
        }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.topo.len()
    }

    pub fn parents(&self, u: usize) -> &[usize] {
        &self.parents[u]
    }

    pub fn children(&self, u: usize) -> &[usize] {
        &self.children[u]
    }

    pub fn is_parent(&self, parent: usize, child: usize) -> bool {
        self.children[parent].contains(&child)
    }

    /// Vertices with every parent before its children.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn depth(&self, u: usize) -> usize {
        self.depth[u]
    }

    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Directed edges `(parent, child)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .children
            .iter()
            .enumerate()
            .flat_map(|(u, cs)| cs.iter().map(move |&c| (u, c)))
            .collect();
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DataGraph;
    use crate::label::Label;
    use proptest::prelude::*;

    fn query(labels: &[u32], edges: &[(u32, u32)]) -> QueryGraph {
        let mut g = DataGraph::new(false);
        for (i, &l) in labels.iter().enumerate() {
            g.add_vertex(i as u64, Label(l)).unwrap();
        }
        for &(a, b) in edges {
            g.insert_edge(a, b, Label::UNLABELED).unwrap();
        }
        QueryGraph::new(g).unwrap()
    }

    fn running_query() -> QueryGraph {
        // u1..u5 as indices 0..4
        query(&[0, 1, 2, 1, 0], &[(0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
    }

    #[test]
    fn running_example_dag() {
        let q = running_query();
        let dag = build_dag(&q);
        assert_eq!(dag.root(), 0);
        assert_eq!(dag.edges(), [(0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 4)]);
        assert_eq!(dag.parents(3), &[1, 2]);
        assert!(dag.children(4).is_empty());
        // u5 is two hops from u1 through u3
        assert_eq!(dag_height(&q, 0), Ok(2));
    }

    #[test]
    fn single_vertex() {
        let q = query(&[0], &[]);
        let dag = build_dag(&q);
        assert_eq!(dag.root(), 0);
        assert!(dag.edges().is_empty());
        assert_eq!(dag.height(), 0);
    }

    #[test]
    fn path_prefers_endpoint_root() {
        let q = query(&[0, 1, 2], &[(0, 1), (1, 2)]);
        assert_eq!(dag_height(&q, 0), Ok(2));
        assert_eq!(dag_height(&q, 1), Ok(1));
        assert_eq!(dag_height(&q, 2), Ok(2));
        assert_eq!(dag_height(&q, 3), Err(DagError::UnknownRoot(3)));
        let dag = build_dag(&q);
        assert_eq!(dag.root(), 0);
        assert_eq!(dag.edges(), [(0, 1), (1, 2)]);
    }

    #[test]
    fn equal_depth_edges_follow_visit_order() {
        // triangle: 1 and 2 are both at depth 1 from 0, 1 is visited first
        let q = query(&[0, 0, 0], &[(0, 1), (0, 2), (1, 2)]);
        let dag = build_dag(&q);
        assert_eq!(dag.edges(), [(0, 1), (0, 2), (1, 2)]);
    }

    fn connected_query() -> impl Strategy<Value = QueryGraph> {
        (2usize..8)
            .prop_flat_map(|n| {
                let tree = proptest::collection::vec(any::<prop::sample::Index>(), n - 1);
                let extra = proptest::collection::vec((0..n, 0..n), 0..6);
                (Just(n), tree, extra)
            })
            .prop_map(|(n, tree, extra)| {
                let mut g = DataGraph::new(false);
                for i in 0..n {
                    g.add_vertex(i as u64, Label(0)).unwrap();
                }
                for (i, idx) in tree.iter().enumerate() {
                    let child = i + 1;
                    let _ = g.insert_edge(idx.index(child) as u32, child as u32, Label::UNLABELED);
                }
                for (a, b) in extra {
                    let _ = g.insert_edge(a as u32, b as u32, Label::UNLABELED);
                }
                QueryGraph::new(g).unwrap()
            })
    }

    proptest! {
        #[test]
        fn dag_invariants(q in connected_query()) {
            let dag = build_dag(&q);
            let n = q.vertex_count();
            let roots: Vec<_> = (0..n).filter(|&u| dag.parents(u).is_empty()).collect();
            prop_assert_eq!(roots, vec![dag.root()]);
            let mut pos = vec![0; n];
            for (i, &u) in dag.topological_order().iter().enumerate() {
                pos[u] = i;
            }
            let mut directed = 0;
            for u in 0..n {
                let mut nbrs: Vec<usize> = dag.parents(u).iter().chain(dag.children(u)).copied().collect();
                nbrs.sort_unstable();
                prop_assert_eq!(&nbrs[..], q.neighbors(u));
                for &c in dag.children(u) {
                    prop_assert!(pos[u] < pos[c]);
                    prop_assert!(!dag.is_parent(c, u));
                    directed += 1;
                }
            }
            prop_assert_eq!(directed, q.edge_count());
            let best = dag_height(&q, dag.root()).unwrap();
            for w in 0..n {
                prop_assert!(dag_height(&q, w).unwrap() <= best);
            }
        }
    }
}
