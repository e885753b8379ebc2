use serde::{Deserialize, Serialize};

use crate::model::{Edge, Embedding, PatternGraph};

/// A copy `T` of the pattern together with, for every pattern vertex `p`, two
/// distinct copy edges that the coloring of `image(p)` paints alike. Valid
/// certificates prove that no vertex of `T` sees `T` as rainbow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationCertificate {
    pub pattern: PatternGraph,
    pub embedding: Embedding,
    /// Indexed by pattern vertex.
    pub collisions: Vec<(Edge, Edge)>,
}

impl ViolationCertificate {
    pub fn copy_edges(&self) -> Vec<Edge> {
        self.embedding.copy_edges(&self.pattern)
    }

    pub fn host_vertices(&self) -> &[usize] {
        self.embedding.map()
    }
}

/// How slack vertices collide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    /// Every slack vertex's coloring agrees on this fixed pair of copy edges.
    Edges(Edge, Edge),
    /// Slack vertex `a` agrees on its own pair `(a h1, a h2)`; usable when the
    /// target copy joins every added vertex to both hubs (cliques).
    Hub(usize, usize),
}

impl Anchor {
    /// The collision pair a slack vertex `v` contributes.
    pub fn pair_for(&self, v: usize) -> (Edge, Edge) {
        match *self {
            Anchor::Edges(e1, e2) => (e1, e2),
            Anchor::Hub(h1, h2) => (Edge::new(v, h1), Edge::new(v, h2)),
        }
    }
}

/// A certificate plus host vertices outside the copy that are pre-qualified to
/// join it: each slack vertex collides on its anchor pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchoredViolation {
    pub certificate: ViolationCertificate,
    pub anchor: Option<Anchor>,
    pub slack: Vec<usize>,
}
