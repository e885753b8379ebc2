//! Pattern graphs, coloring families, embeddings and certificates.

mod certificate;
mod embedding;
mod family;
pub mod io;
pub mod iso;
mod pattern;

pub use certificate::{Anchor, AnchoredViolation, ViolationCertificate};
pub use embedding::{
    automorphism_count, binomial, copy_count, enumerate_copies, local_labelings, CopyEnumerator,
    Embedding, MAX_ENUM_VERTICES,
};
pub use family::{host_edge_count, ColorSource, ColoringFamily, Edge};
pub use iso::subgraph_contains;
pub use pattern::{PatternGraph, PatternTag};

/// Builds a named pattern (`P4`, `S5`, `I7`, `C4`, `K8`, `K7,7`, `P2+3K2`, ...).
pub fn make_pattern(tag: &str) -> crate::Result<PatternGraph> {
    PatternGraph::named(tag)
}
