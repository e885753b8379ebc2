//! Ground truth: rainbow checks, exhaustive goodness, certificate validation.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    copy_count, enumerate_copies, subgraph_contains, AnchoredViolation, ColoringFamily, Edge,
    Embedding, PatternGraph, ViolationCertificate,
};

/// Default ceiling on the number of copies an exhaustive check may visit.
pub const DEFAULT_MAX_COPIES: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodnessReport {
    pub is_good: bool,
    /// First bad copy in enumeration order, present iff `!is_good`.
    pub witness: Option<ViolationCertificate>,
    pub copies_checked: u64,
}

/// Whether `owner`'s coloring gives the copy pairwise distinct colors.
pub fn is_rainbow(
    family: &ColoringFamily,
    owner: usize,
    pattern: &PatternGraph,
    embedding: &Embedding,
) -> Result<bool> {
    if owner >= family.n() {
        return Err(Error::VertexOutOfRange { vertex: owner, n: family.n() });
    }
    Ok(first_collision(family, owner, &embedding.copy_edges(pattern)).is_none())
}

/// Lexicographically least pair of edges (in sorted edge order) that `owner`
/// colors alike, if any.
pub fn first_collision(family: &ColoringFamily, owner: usize, edges: &[Edge]) -> Option<(Edge, Edge)> {
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    let colors: Vec<u32> = sorted.iter().map(|&e| family.color_of(owner, e)).collect();
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if colors[i] == colors[j] {
                return Some((sorted[i], sorted[j]));
            }
        }
    }
    None
}

/// Some vertex of the copy sees it as rainbow.
pub fn copy_is_good(family: &ColoringFamily, pattern: &PatternGraph, embedding: &Embedding) -> bool {
    let edges = embedding.copy_edges(pattern);
    embedding.map().iter().any(|&v| first_collision(family, v, &edges).is_none())
}

/// Canonical certificate for a bad copy, or `None` if the copy is good.
pub fn certificate_for_copy(
    family: &ColoringFamily,
    pattern: &PatternGraph,
    embedding: &Embedding,
) -> Option<ViolationCertificate> {
    let edges = embedding.copy_edges(pattern);
    let collisions = embedding
        .map()
        .iter()
        .map(|&v| first_collision(family, v, &edges))
        .collect::<Option<Vec<_>>>()?;
    Some(ViolationCertificate { pattern: pattern.clone(), embedding: embedding.clone(), collisions })
}

pub fn family_is_good(family: &ColoringFamily, pattern: &PatternGraph) -> Result<GoodnessReport> {
    family_is_good_with_limit(family, pattern, DEFAULT_MAX_COPIES)
}

/// Exhaustive check over every copy; refuses up front when the copy count
/// exceeds `max_copies`.
pub fn family_is_good_with_limit(
    family: &ColoringFamily,
    pattern: &PatternGraph,
    max_copies: u128,
) -> Result<GoodnessReport> {
    let total = copy_count(pattern, family.n())?;
    if total > max_copies {
        return Err(Error::ScaleGuard {
            what: format!("goodness check of {} on K_{}", pattern.label(), family.n()),
            needed: total,
            limit: max_copies,
        });
    }
    let mut checked = 0u64;
    for emb in enumerate_copies(pattern, family.n())? {
        checked += 1;
        if let Some(cert) = certificate_for_copy(family, pattern, &emb) {
            return Ok(GoodnessReport { is_good: false, witness: Some(cert), copies_checked: checked });
        }
    }
    Ok(GoodnessReport { is_good: true, witness: None, copies_checked: checked })
}

/// Number of bad copies (no early exit).
pub fn count_bad_copies(family: &ColoringFamily, pattern: &PatternGraph, max_copies: u128) -> Result<u64> {
    let total = copy_count(pattern, family.n())?;
    if total > max_copies {
        return Err(Error::ScaleGuard {
            what: format!("bad-copy count of {} on K_{}", pattern.label(), family.n()),
            needed: total,
            limit: max_copies,
        });
    }
    Ok(enumerate_copies(pattern, family.n())?.filter(|e| !copy_is_good(family, pattern, e)).count()
        as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateDefect {
    BadEmbedding(String),
    CollisionCount { expected: usize, found: usize },
    NotCopyEdge { vertex: usize, edge: Edge },
    RepeatedEdge { vertex: usize },
    ColorsDiffer { vertex: usize, first: u32, second: u32 },
    SlackInsideCopy { vertex: usize },
    SlackNotColliding { vertex: usize },
    MissingAnchor,
}

impl fmt::Display for CertificateDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateDefect::BadEmbedding(m) => write!(f, "bad embedding: {m}"),
            CertificateDefect::CollisionCount { expected, found } => {
                write!(f, "{found} collision pairs for {expected} vertices")
            }
            CertificateDefect::NotCopyEdge { vertex, edge } => {
                write!(f, "vertex {vertex}: {edge} is not a copy edge")
            }
            CertificateDefect::RepeatedEdge { vertex } => write!(f, "vertex {vertex}: pair repeats one edge"),
            CertificateDefect::ColorsDiffer { vertex, first, second } => {
                write!(f, "vertex {vertex}: colors {first} != {second}")
            }
            CertificateDefect::SlackInsideCopy { vertex } => write!(f, "slack vertex {vertex} is in the copy"),
            CertificateDefect::SlackNotColliding { vertex } => {
                write!(f, "slack vertex {vertex} does not collide on its anchor pair")
            }
            CertificateDefect::MissingAnchor => write!(f, "slack present without an anchor"),
        }
    }
}

/// Outcome of certificate validation; empty `defects` means valid.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub defects: Vec<CertificateDefect>,
}

impl CertificateCheck {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty()
    }
}

pub fn check_certificate(family: &ColoringFamily, cert: &ViolationCertificate) -> CertificateCheck {
    let mut defects = Vec::new();
    if let Err(e) = Embedding::new(&cert.pattern, cert.embedding.map().to_vec(), family.n()) {
        defects.push(CertificateDefect::BadEmbedding(e.to_string()));
        return CertificateCheck { defects };
    }
    let v = cert.pattern.num_vertices();
    if cert.collisions.len() != v {
        defects.push(CertificateDefect::CollisionCount { expected: v, found: cert.collisions.len() });
        return CertificateCheck { defects };
    }
    let copy: HashSet<Edge> = cert.copy_edges().into_iter().collect();
    for (p, &(e1, e2)) in cert.collisions.iter().enumerate() {
        let owner = cert.embedding.image(p);
        let mut ok = true;
        for e in [e1, e2] {
            if !copy.contains(&e) {
                defects.push(CertificateDefect::NotCopyEdge { vertex: owner, edge: e });
                ok = false;
            }
        }
        if e1 == e2 {
            defects.push(CertificateDefect::RepeatedEdge { vertex: owner });
            ok = false;
        }
        if ok {
            let (c1, c2) = (family.color_of(owner, e1), family.color_of(owner, e2));
            if c1 != c2 {
                defects.push(CertificateDefect::ColorsDiffer { vertex: owner, first: c1, second: c2 });
            }
        }
    }
    CertificateCheck { defects }
}

/// Validates the certificate and re-checks every slack vertex on its anchor pair.
pub fn check_anchored(family: &ColoringFamily, av: &AnchoredViolation) -> CertificateCheck {
    let mut check = check_certificate(family, &av.certificate);
    if !check.is_valid() {
        return check;
    }
    let in_copy: HashSet<usize> = av.certificate.host_vertices().iter().copied().collect();
    let copy: HashSet<Edge> = av.certificate.copy_edges().into_iter().collect();
    if let Some(crate::model::Anchor::Edges(e1, e2)) = av.anchor {
        for e in [e1, e2] {
            if !copy.contains(&e) {
                check.defects.push(CertificateDefect::NotCopyEdge { vertex: usize::MAX, edge: e });
            }
        }
    }
    if !av.slack.is_empty() && av.anchor.is_none() {
        check.defects.push(CertificateDefect::MissingAnchor);
        return check;
    }
    for &s in &av.slack {
        if s >= family.n() {
            check.defects.push(CertificateDefect::BadEmbedding(format!("slack vertex {s} out of range")));
            continue;
        }
        if in_copy.contains(&s) {
            check.defects.push(CertificateDefect::SlackInsideCopy { vertex: s });
            continue;
        }
        let (e1, e2) = av.anchor.unwrap().pair_for(s);
        if e1 == e2 || family.color_of(s, e1) != family.color_of(s, e2) {
            check.defects.push(CertificateDefect::SlackNotColliding { vertex: s });
        }
    }
    check
}

/// Lifts a certificate for `H'` to a certificate for a supergraph `H` on the
/// same number of vertices: adding edges cannot repair a collision.
pub fn extend_violation(
    family: &ColoringFamily,
    cert: &ViolationCertificate,
    target: &PatternGraph,
) -> Result<ViolationCertificate> {
    if target.num_vertices() != cert.pattern.num_vertices() {
        return Err(Error::SizeMismatch(format!(
            "target has {} vertices, certified pattern has {}",
            target.num_vertices(),
            cert.pattern.num_vertices()
        )));
    }
    ensure_valid(family, cert)?;
    let map = subgraph_contains(target, &cert.pattern).ok_or_else(|| {
        Error::NotSubgraph(format!("{} is not a subgraph of {}", cert.pattern.label(), target.label()))
    })?;
    let v = target.num_vertices();
    let mut host = vec![0; v];
    let mut collisions = vec![(Edge(0, 0), Edge(0, 0)); v];
    for p in 0..v {
        host[map[p]] = cert.embedding.image(p);
        collisions[map[p]] = cert.collisions[p];
    }
    let out = ViolationCertificate {
        pattern: target.clone(),
        embedding: Embedding::new(target, host, family.n())?,
        collisions,
    };
    ensure_valid(family, &out)?;
    Ok(out)
}

/// Lifts an anchored violation to a target with extra vertices, drawing them
/// from the slack set; each added vertex collides on its anchor pair.
pub fn extend_with_slack(
    family: &ColoringFamily,
    av: &AnchoredViolation,
    target: &PatternGraph,
) -> Result<ViolationCertificate> {
    let cert = &av.certificate;
    ensure_valid(family, cert)?;
    let map = subgraph_contains(target, &cert.pattern).ok_or_else(|| {
        Error::NotSubgraph(format!("{} is not a subgraph of {}", cert.pattern.label(), target.label()))
    })?;
    let v = target.num_vertices();
    let mut covered = vec![false; v];
    for &t in &map {
        covered[t] = true;
    }
    let extra: Vec<usize> = (0..v).filter(|&t| !covered[t]).collect();
    let in_copy: HashSet<usize> = cert.host_vertices().iter().copied().collect();
    let slack: Vec<usize> = av.slack.iter().copied().filter(|s| !in_copy.contains(s)).collect();
    if slack.len() < extra.len() {
        return Err(Error::SlackTooSmall { needed: extra.len(), available: slack.len() });
    }
    if !extra.is_empty() && av.anchor.is_none() {
        return Err(Error::AnchorUnusable("no anchor pair recorded".into()));
    }
    let mut host = vec![0; v];
    let mut collisions = vec![(Edge(0, 0), Edge(0, 0)); v];
    for p in 0..cert.pattern.num_vertices() {
        host[map[p]] = cert.embedding.image(p);
        collisions[map[p]] = cert.collisions[p];
    }
    for (&t, &s) in extra.iter().zip(&slack) {
        host[t] = s;
        collisions[t] = av.anchor.unwrap().pair_for(s);
    }
    let embedding = Embedding::new(target, host, family.n())?;
    let copy: HashSet<Edge> = embedding.copy_edges(target).into_iter().collect();
    for &t in &extra {
        let (e1, e2) = collisions[t];
        if !copy.contains(&e1) || !copy.contains(&e2) {
            return Err(Error::AnchorUnusable(format!(
                "anchor pair ({e1}, {e2}) of added vertex {} is not in the target copy",
                embedding.image(t)
            )));
        }
    }
    let out = ViolationCertificate { pattern: target.clone(), embedding, collisions };
    ensure_valid(family, &out)?;
    Ok(out)
}

fn ensure_valid(family: &ColoringFamily, cert: &ViolationCertificate) -> Result<()> {
    let check = check_certificate(family, cert);
    if check.is_valid() {
        Ok(())
    } else {
        let msgs: Vec<String> = check.defects.iter().map(|d| d.to_string()).collect();
        Err(Error::InvalidCertificate(msgs.join("; ")))
    }
}
