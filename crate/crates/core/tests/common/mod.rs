#![allow(dead_code)]

use csm_core::{DataGraph, Label, QueryGraph};

pub const A: Label = Label(0);
pub const B: Label = Label(1);
pub const C: Label = Label(2);

/// Query of the running example: u1..u5 get internal ids 0..4.
pub fn running_query() -> QueryGraph {
    let mut q = DataGraph::new(false);
    for (id, l) in [(1, A), (2, B), (3, C), (4, B), (5, A)] {
        q.add_vertex(id, l).unwrap();
    }
    for (a, b) in [(0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 4)] {
        q.insert_edge(a, b, Label::UNLABELED).unwrap();
    }
    QueryGraph::new(q).unwrap()
}

/// Initial data graph of the running example: v_i has external id i and
/// internal id i - 1.
pub fn running_graph() -> DataGraph {
    let mut g = DataGraph::new(false);
    for i in 1..=106u64 {
        let l = match i {
            3 | 5 | 6 => B,
            4 => C,
            _ => A,
        };
        g.add_vertex(i, l).unwrap();
    }
    let mut add = |a: u64, b: u64| {
        let (a, b) = (g.vertex(a).unwrap(), g.vertex(b).unwrap());
        g.insert_edge(a, b, Label::UNLABELED).unwrap();
    };
    for (a, b) in [(1, 3), (2, 3), (1, 4), (2, 4), (4, 6)] {
        add(a, b);
    }
    for w in 7..=106 {
        add(6, w);
    }
    for w in 8..=106 {
        add(4, w);
    }
    g
}

/// Internal id of v_i.
pub fn v(i: u32) -> u32 {
    i - 1
}
