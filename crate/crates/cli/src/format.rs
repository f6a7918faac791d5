//! Line-oriented text formats for graphs and update streams.
//!
//! Graph and query files:
//!
//! ```text
//! v <id> <label>
//! e <src> <dst> [<elabel>]
//! ```
//!
//! Stream files:
//!
//! ```text
//! + <src> <dst> [<elabel>]
//! - <src> <dst>
//! v+ <id> <label>
//! v- <id>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Edge labels are
//! required when edge labels are enabled and ignored otherwise.

use std::fmt::Write as _;

use csm_core::{DataGraph, GraphError, Label, Labels, QueryError, QueryGraph, UpdateOp};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("invalid query: {0}")]
    Query(#[from] QueryError),
}

/// Whether the edge label column is significant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FormatOptions {
    pub directed: bool,
    pub edge_labels: bool,
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

// (line number, fields) of every non-comment line.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn id(line: usize, s: &str) -> Result<u64, FormatError> {
    s.parse().map_err(|_| syntax(line, format!("bad vertex id `{s}`")))
}

fn edge_label(
    line: usize,
    field: Option<&&str>,
    opts: FormatOptions,
    labels: &mut Labels,
) -> Result<Label, FormatError> {
    match (opts.edge_labels, field) {
        (false, _) => Ok(Label::UNLABELED),
        (true, Some(l)) => Ok(labels.edge.intern(l)),
        (true, None) => Err(syntax(line, "missing edge label")),
    }
}

fn arity(line: usize, f: &[&str], min: usize, max: usize) -> Result<(), FormatError> {
    if f.len() < min || f.len() > max {
        return Err(syntax(line, format!("expected {}..={} fields, got {}", min, max, f.len())));
    }
    Ok(())
}

/// Parses an initial data graph.
pub fn parse_initial_graph(text: &str, opts: FormatOptions, labels: &mut Labels) -> Result<DataGraph, FormatError> {
    let mut g = DataGraph::new(opts.directed);
    for (line, f) in records(text) {
        let graph_err = |source| FormatError::Graph { line, source };
        match f[0] {
            "v" => {
                arity(line, &f, 3, 3)?;
                let label = labels.vertex.intern(f[2]);
                g.add_vertex(id(line, f[1])?, label).map_err(graph_err)?;
            }
            "e" => {
                arity(line, &f, 3, 4)?;
                let (s, d) = (id(line, f[1])?, id(line, f[2])?);
                let label = edge_label(line, f.get(3), opts, labels)?;
                let a = g.vertex(s).ok_or(GraphError::UnknownVertex(s)).map_err(graph_err)?;
                let b = g.vertex(d).ok_or(GraphError::UnknownVertex(d)).map_err(graph_err)?;
                g.insert_edge(a, b, label).map_err(graph_err)?;
            }
            other => return Err(syntax(line, format!("unknown record `{other}`"))),
        }
    }
    Ok(g)
}

/// Parses a query graph; it must be non-empty and connected.
pub fn parse_query(text: &str, opts: FormatOptions, labels: &mut Labels) -> Result<QueryGraph, FormatError> {
    Ok(QueryGraph::new(parse_initial_graph(text, opts, labels)?)?)
}

/// Parses an update stream. Operations are not checked against any graph.
pub fn parse_update_stream(text: &str, opts: FormatOptions, labels: &mut Labels) -> Result<Vec<UpdateOp>, FormatError> {
    let mut ops = Vec::new();
    for (line, f) in records(text) {
        let op = match f[0] {
            "+" => {
                arity(line, &f, 3, 4)?;
                UpdateOp::InsertEdge {
                    src: id(line, f[1])?,
                    dst: id(line, f[2])?,
                    label: edge_label(line, f.get(3), opts, labels)?,
                }
            }
            "-" => {
                arity(line, &f, 3, 3)?;
                UpdateOp::DeleteEdge { src: id(line, f[1])?, dst: id(line, f[2])? }
            }
            "v+" => {
                arity(line, &f, 3, 3)?;
                UpdateOp::InsertVertex { id: id(line, f[1])?, label: labels.vertex.intern(f[2]) }
            }
            "v-" => {
                arity(line, &f, 2, 2)?;
                UpdateOp::DeleteVertex { id: id(line, f[1])? }
            }
            other => return Err(syntax(line, format!("unknown operation `{other}`"))),
        };
        ops.push(op);
    }
    Ok(ops)
}

fn label_name(interner: &csm_core::LabelInterner, l: Label) -> String {
    interner.name(l).map_or_else(|| l.to_string(), str::to_owned)
}

/// Serializes a graph in the format read by [`parse_initial_graph`].
pub fn write_graph(g: &DataGraph, opts: FormatOptions, labels: &Labels) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        let l = g.label(v).expect("live vertex");
        writeln!(out, "v {} {}", g.external_id(v), label_name(&labels.vertex, l)).unwrap();
    }
    for (a, b, l) in g.edges() {
        write!(out, "e {} {}", g.external_id(a), g.external_id(b)).unwrap();
        if opts.edge_labels {
            write!(out, " {}", label_name(&labels.edge, l)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Serializes a stream in the format read by [`parse_update_stream`].
pub fn write_stream(ops: &[UpdateOp], opts: FormatOptions, labels: &Labels) -> String {
    let mut out = String::new();
    for op in ops {
        match *op {
            UpdateOp::InsertEdge { src, dst, label } => {
                write!(out, "+ {src} {dst}").unwrap();
                if opts.edge_labels {
                    write!(out, " {}", label_name(&labels.edge, label)).unwrap();
                }
                out.push('\n');
            }
            UpdateOp::DeleteEdge { src, dst } => writeln!(out, "- {src} {dst}").unwrap(),
            UpdateOp::InsertVertex { id, label } => {
                writeln!(out, "v+ {id} {}", label_name(&labels.vertex, label)).unwrap()
            }
            UpdateOp::DeleteVertex { id } => writeln!(out, "v- {id}").unwrap(),
        }
    }
    out
}
