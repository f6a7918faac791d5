//! Continuous subgraph matching over a dynamic, labeled data graph.
//!
//! Given a connected query graph and a stream of edge insertions and
//! deletions, the engine reports every embedding of the query that appears
//! (positive match) or disappears (negative match) with each update.
//!
//! The filtering index is a *dynamic candidate space* ([`Dcs`]) built over a
//! rooted DAG of the query ([`QueryDag`]). Each candidate pair `<u, v>` carries
//! two flags computed by dynamic programming over the DAG: a top-down flag
//! (`D1`) and a bottom-up flag conditioned on it (`D2`). Counter arrays make
//! both flags maintainable in time proportional to the part of the index that
//! actually changes. The [`matcher`] then backtracks from the index edges
//! touched by an update, ordered by an estimate of the extendable candidate
//! count, and postpones isolated query vertices.
//!
//! The crate is `no_std` and only needs `alloc`. Text formats, workload
//! generation and the command line live in `csm-cli`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dag;
pub mod dcs;
pub mod engine;
pub mod graph;
pub mod label;
pub mod matcher;
pub mod oracle;
pub mod update;

pub use dag::{build_dag, dag_height, QueryDag};
pub use dcs::{dcs_changed_edges, Cell, Dcs, DcsEdge, EdgeChange, UpdateStats};
pub use engine::{Engine, EngineConfig, OpSummary, Phase, PhaseTimer, Polarity};
pub use graph::{DataGraph, GraphError, QueryError, QueryGraph, VertexId};
pub use label::{Label, LabelInterner, Labels};
pub use matcher::{MatchConfig, MatchMode, OrderStrategy, Postpone, SearchStats};
pub use update::UpdateOp;
