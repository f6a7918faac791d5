//! File formats, workload generation and the stream driver for `csm-core`.

pub mod format;
pub mod harness;
pub mod workload;
