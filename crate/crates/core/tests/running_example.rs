mod common;

use common::{running_graph, running_query, v};
use csm_core::matcher::{extendable_candidates, select_next_vertex, PartialEmbedding, Selection};
use csm_core::oracle::{delta_matches, enumerate_embeddings, OracleLimits};
use csm_core::{
    build_dag, dcs_changed_edges, Cell, DcsEdge, EdgeChange, Engine, EngineConfig, Label, MatchConfig, MatchMode,
    SearchStats, UpdateOp,
};

const U1: usize = 0;
const U2: usize = 1;
const U3: usize = 2;
const U4: usize = 3;
const U5: usize = 4;

const DO1: UpdateOp = UpdateOp::InsertEdge { src: 4, dst: 7, label: Label::UNLABELED };
const DO2: UpdateOp = UpdateOp::InsertEdge { src: 3, dst: 6, label: Label::UNLABELED };

fn limits() -> OracleLimits {
    OracleLimits { max_query_vertices: 8, max_data_vertices: 128 }
}

fn engine() -> Engine {
    Engine::new(running_graph(), running_query(), EngineConfig::default())
}

fn change(a: u32, b: u32) -> EdgeChange {
    EdgeChange { src: v(a), dst: v(b), label: Label::UNLABELED, insert: true }
}

#[test]
fn initial_graph_shape() {
    let g = running_graph();
    assert_eq!(g.vertex_count(), 106);
    assert_eq!(g.edge_count(), 5 + 100 + 99);
    let q = running_query();
    assert_eq!(build_dag(&q).edges(), [(0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 4)]);
}

#[test]
fn initial_candidate_space() {
    let e = engine();
    let dcs = e.dcs();
    assert_eq!(dcs.candidates(U2), &[v(3), v(5), v(6)]);
    assert!(dcs.d1(U2, v(3)));
    assert!(!dcs.d2(U2, v(3)));
    // v1 and v2 are both A-neighbors of v3
    assert_eq!(dcs.n1(U2, v(3), U1), 2);
    assert!(enumerate_embeddings(e.query(), e.graph(), MatchMode::Iso, limits())
        .unwrap()
        .is_empty());
}

#[test]
fn first_insertion_is_rejected_without_search() {
    let mut e = engine();
    let e_dcs = dcs_changed_edges(e.graph(), e.query(), change(4, 7));
    assert_eq!(
        e_dcs,
        [
            DcsEdge::new(Cell::new(U1, v(7)), Cell::new(U3, v(4))),
            DcsEdge::new(Cell::new(U3, v(4)), Cell::new(U5, v(7))),
        ]
    );
    let s = e.apply(&DO1, &mut (), &mut |_| {}).unwrap();
    assert_eq!(s.matches, 0);
    assert_eq!(s.search, SearchStats::default());
    assert!(e.dcs().first_difference(&e.rebuild()).is_none());
}

#[test]
fn second_insertion_finds_200_matches() {
    let mut e = engine();
    e.apply(&DO1, &mut (), &mut |_| {}).unwrap();
    let e_dcs = dcs_changed_edges(e.graph(), e.query(), change(3, 6));
    assert_eq!(
        e_dcs,
        [
            DcsEdge::new(Cell::new(U2, v(3)), Cell::new(U4, v(6))),
            DcsEdge::new(Cell::new(U2, v(6)), Cell::new(U4, v(3))),
        ]
    );
    assert_eq!(e.dcs().n1p(U4, v(6)), 1);
    assert!(!e.dcs().d1(U4, v(6)));

    let expected = delta_matches(e.query(), e.graph(), &DO2, MatchMode::Iso, limits()).unwrap();
    let mut found = std::collections::BTreeSet::new();
    let s = e.apply(&DO2, &mut (), &mut |m| assert!(found.insert(m.to_vec()))).unwrap();
    assert_eq!(s.matches, 200);
    assert_eq!(expected.positive.len(), 200);
    assert_eq!(found, expected.positive);

    assert_eq!(e.dcs().n1(U4, v(6), U2), 1);
    assert_eq!(e.dcs().n1p(U4, v(6)), 2);
    assert!(e.dcs().d1(U4, v(6)));
    assert!(e.dcs().first_difference(&e.rebuild()).is_none());
}

#[test]
fn estimates_and_candidates_after_second_insertion() {
    let mut e = engine();
    e.apply(&DO1, &mut (), &mut |_| {}).unwrap();
    e.apply(&DO2, &mut (), &mut |_| {}).unwrap();
    let (g, q, dcs) = (e.graph(), e.query(), e.dcs());

    let mut m = PartialEmbedding::new(5);
    m.update(q, dcs, U2, v(3));
    m.update(q, dcs, U4, v(6));
    assert_eq!(m.estimate(U3), Some(1));
    assert_eq!(m.estimate(U1), Some(2));
    assert_eq!(m.estimate(U5), Some(100));

    let mut buf = Vec::new();
    extendable_candidates(g, q, dcs, &m, U3, &mut buf);
    assert_eq!(buf, [v(4)]);

    let cfg = MatchConfig::default();
    let mut stats = SearchStats::default();
    assert_eq!(
        select_next_vertex(g, q, dcs, &m, &cfg, &mut stats, &mut buf),
        Selection::Vertex(U3)
    );
}

#[test]
fn deleting_the_edge_again_reports_the_same_matches() {
    let mut e = engine();
    e.apply(&DO1, &mut (), &mut |_| {}).unwrap();
    let before = e.clone();
    let mut added = Vec::new();
    e.apply(&DO2, &mut (), &mut |m| added.push(m.to_vec())).unwrap();
    let mut removed = Vec::new();
    let s = e
        .apply(&UpdateOp::DeleteEdge { src: 6, dst: 3 }, &mut (), &mut |m| removed.push(m.to_vec()))
        .unwrap();
    assert_eq!(s.matches, 200);
    added.sort();
    removed.sort();
    assert_eq!(added, removed);
    assert_eq!(e, before);
}
