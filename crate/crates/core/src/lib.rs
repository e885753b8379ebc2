//! Per-vertex rainbow colorings of complete graphs.
//!
//! A *coloring family* on `K_n` assigns every vertex `v` its own edge coloring
//! `f_v : E(K_n) -> [k]`. The family is *good* for a pattern graph `H` when every
//! copy `T` of `H` in `K_n` has at least one vertex `v ∈ V(T)` whose coloring is
//! rainbow on `E(T)`. `C(n, H)` is the least `k` admitting a good family.
//!
//! The crate is organised around that definition:
//!
//! * [`model`]: pattern graphs, coloring families, embeddings, certificates and
//!   their file formats.
//! * [`verify`]: the ground-truth goodness checker and certificate validation.
//! * [`extract`]: the pigeonhole extraction primitives (stars, matchings,
//!   bipartitions, cliques) with recountable witnesses.
//! * [`finders`]: deterministic violation finders, one per pattern family, each
//!   returning a re-checkable certificate or an explicit refusal.
//! * [`exact`]: exact `C(n, H)` at desk scale and DIMACS export.
//! * [`generate`]: seeded family generators and a resampling good-family builder.

pub mod error;
pub mod exact;
pub mod extract;
pub mod finders;
pub mod generate;
pub mod model;
pub mod pigeonhole;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
pub use model::{
    AnchoredViolation, Anchor, ColoringFamily, Edge, Embedding, PatternGraph, PatternTag,
    ViolationCertificate,
};
