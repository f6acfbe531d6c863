//! Dividing and forking in the theory of the generic `K_n`-free graph.

pub mod formula;
pub mod graph;
pub mod independence;
pub mod instances;
pub mod oracle;
pub mod sequence;
