//! Violation finders. Each one is a deterministic pipeline of pigeonhole
//! stages that ends in a certificate re-checked by [`crate::verify`], or in an
//! explicit [`ThresholdNotMet`] naming the first stage whose bucket came up
//! short.
//!
//! Finders use only the largest prefix of the host whose size the layout
//! needs (a multiple of 2 or 3); remaining vertices stay unused.

mod dense;
mod generic;
mod matching;
mod path;
mod star;
pub mod thresholds;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::Split;
use crate::model::{
    Anchor, AnchoredViolation, ColoringFamily, Edge, Embedding, PatternGraph, PatternTag,
    ViolationCertificate,
};
use crate::pigeonhole::{common_member, Peeling};
use crate::verify::{check_anchored, extend_with_slack};

pub use dense::{find_c4, find_clique, find_complete_bipartite};
pub use generic::{detect_h6_member, generic_find, h6_members, H6Member};
pub use matching::{find_i4, find_matching_56, find_matching_large};
pub use path::find_p4;
pub use star::{find_p2_3k2, find_p2_k2_k2, find_p2_p2, find_s4, find_star};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinderConfig {
    /// Fraction of the ground set every peeling must cover.
    pub coverage: f64,
    /// Candidate pool for best-pair searches.
    pub pair_pool: usize,
    /// Candidate pool for the path finder's best-triple search.
    pub triple_pool: usize,
    /// Best edge pairs for complete bipartite targets are searched among the
    /// edges spanned by this many vertices of `L`.
    pub edge_pool_vertices: usize,
    /// Edge peelings over a vertex set use at most this many of its vertices.
    pub peel_vertices: usize,
    /// Color-read budget for trying star centers.
    pub center_budget: u64,
    pub split: Split,
    /// Copy limit for the brute-force fallback of the generic finder.
    pub fallback_max_copies: u128,
}

impl Default for FinderConfig {
    fn default() -> Self {
        FinderConfig {
            coverage: 0.99,
            pair_pool: 256,
            triple_pool: 200,
            edge_pool_vertices: 25,
            peel_vertices: 1000,
            center_budget: 4_000_000,
            split: Split::Index,
            fallback_max_copies: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub found: u64,
    pub required: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coverage: Option<f64>,
}

/// Honest refusal: the named stage produced `found < required`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdNotMet {
    pub stage: String,
    pub found: u64,
    pub required: u64,
}

impl fmt::Display for ThresholdNotMet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage `{}` found {} < required {}", self.stage, self.found, self.required)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub finder: String,
    pub host: usize,
    pub k: u32,
    pub stages: Vec<StageRecord>,
    /// The procedure is a reconstruction of an omitted argument.
    pub reconstructed: bool,
    /// The certificate came from brute-force search, not a proof pipeline.
    pub fallback: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub member: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinderResult {
    Success(AnchoredViolation),
    ThresholdNotMet(ThresholdNotMet),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinderOutcome {
    pub result: FinderResult,
    pub diagnostics: Diagnostics,
}

impl FinderOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self.result, FinderResult::Success(_))
    }

    pub fn violation(&self) -> Option<&AnchoredViolation> {
        match &self.result {
            FinderResult::Success(v) => Some(v),
            FinderResult::ThresholdNotMet(_) => None,
        }
    }

    pub fn refusal(&self) -> Option<&ThresholdNotMet> {
        match &self.result {
            FinderResult::ThresholdNotMet(t) => Some(t),
            FinderResult::Success(_) => None,
        }
    }
}

/// Inside a pipeline: either a refusal or a hard error.
pub(crate) enum Stop {
    Refuse(ThresholdNotMet),
    Fail(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Fail(e)
    }
}

pub(crate) type Step<T> = std::result::Result<T, Stop>;

/// Stage bookkeeping for one finder run.
pub(crate) struct Run<'a> {
    pub family: &'a ColoringFamily,
    pub cfg: &'a FinderConfig,
    pub diag: Diagnostics,
}

impl<'a> Run<'a> {
    pub fn new(name: &str, family: &'a ColoringFamily, cfg: &'a FinderConfig) -> Self {
        Run {
            family,
            cfg,
            diag: Diagnostics { finder: name.into(), host: family.n(), k: family.k(), ..Default::default() },
        }
    }

    #[inline]
    pub fn color(&self, owner: usize, e: Edge) -> u32 {
        self.family.color_of(owner, e)
    }

    /// Records a stage and refuses when `found < required`.
    pub fn stage(&mut self, name: &str, found: usize, required: usize) -> Step<()> {
        self.diag.stages.push(StageRecord {
            name: name.into(),
            found: found as u64,
            required: required as u64,
            coverage: None,
        });
        if found < required {
            return Err(Stop::Refuse(ThresholdNotMet {
                stage: name.into(),
                found: found as u64,
                required: required as u64,
            }));
        }
        Ok(())
    }

    /// Records a peeling; it must have a nonempty ground and reach the
    /// configured coverage.
    pub fn peel_stage(&mut self, name: &str, p: &Peeling) -> Step<()> {
        let required = coverage_required(p.ground as u64, self.cfg.coverage) as usize;
        let r = self.stage(name, p.covered(), required);
        self.diag.stages.last_mut().unwrap().coverage = Some(p.coverage());
        r
    }

    /// Smallest ground index covered by every peeling.
    pub fn intersect(&mut self, peelings: &[&Peeling]) -> Step<usize> {
        let i = common_member(peelings);
        self.stage("intersect", i.is_some() as usize, 1)?;
        Ok(i.unwrap())
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.diag.notes.push(msg.into());
    }

    /// Turns the pipeline result into an outcome, re-checking any certificate.
    pub fn finish(self, r: Step<AnchoredViolation>) -> Result<FinderOutcome> {
        match r {
            Ok(av) => {
                let check = check_anchored(self.family, &av);
                if !check.is_valid() {
                    return Err(Error::Internal(format!(
                        "{} produced an invalid certificate: {:?}",
                        self.diag.finder, check.defects
                    )));
                }
                Ok(FinderOutcome { result: FinderResult::Success(av), diagnostics: self.diag })
            }
            Err(Stop::Refuse(t)) => {
                Ok(FinderOutcome { result: FinderResult::ThresholdNotMet(t), diagnostics: self.diag })
            }
            Err(Stop::Fail(e)) => Err(e),
        }
    }
}

/// Items a peeling of `ground` items must cover; at least one.
pub(crate) fn coverage_required(ground: u64, coverage: f64) -> u64 {
    ((coverage * ground as f64 - 1e-9).ceil() as u64).max(1)
}

/// Assembles a certificate from a named pattern, the host image of each pattern
/// vertex and its collision pair.
pub(crate) fn assemble(
    family: &ColoringFamily,
    tag: PatternTag,
    map: Vec<usize>,
    collisions: Vec<(Edge, Edge)>,
    anchor: Option<Anchor>,
    slack: Vec<usize>,
) -> Result<AnchoredViolation> {
    let pattern = PatternGraph::from_tag(&tag)?;
    let embedding = Embedding::new(&pattern, map, family.n())?;
    Ok(AnchoredViolation { certificate: ViolationCertificate { pattern, embedding, collisions }, anchor, slack })
}

/// `v` with the members of `used` removed, order kept.
pub(crate) fn without(v: &[usize], used: &[usize]) -> Vec<usize> {
    v.iter().copied().filter(|x| !used.contains(x)).collect()
}

/// Consecutive pairs of `v` as edges.
pub(crate) fn index_matching(v: &[usize]) -> Vec<Edge> {
    v.chunks_exact(2).map(|c| Edge::new(c[0], c[1])).collect()
}

/// Patterns with a dedicated finder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinderKind {
    P4,
    S4,
    P2K2K2,
    P2P2,
    Star(usize),
    I4,
    Matching56(usize),
    MatchingLarge(usize),
    P2ThreeK2,
    C4,
    Clique(usize),
    CompleteBipartite(usize, usize),
}

impl FinderKind {
    pub fn tag(&self) -> PatternTag {
        use PatternTag::*;
        match *self {
            FinderKind::P4 => Path(4),
            FinderKind::S4 => Star(4),
            FinderKind::P2K2K2 => Union(vec![Path(2), Clique(2), Clique(2)]),
            FinderKind::P2P2 => Union(vec![Path(2), Path(2)]),
            FinderKind::Star(t) => Star(t),
            FinderKind::I4 => Matching(4),
            FinderKind::Matching56(t) | FinderKind::MatchingLarge(t) => Matching(t),
            FinderKind::P2ThreeK2 => Union(vec![Path(2), Clique(2), Clique(2), Clique(2)]),
            FinderKind::C4 => Cycle(4),
            FinderKind::Clique(r) => Clique(r),
            FinderKind::CompleteBipartite(s, t) => CompleteBipartite(s, t),
        }
    }

    pub fn pattern(&self) -> PatternGraph {
        PatternGraph::from_tag(&self.tag()).expect("finder patterns are valid")
    }

    pub fn name(&self) -> String {
        match *self {
            FinderKind::P4 => "find_p4".into(),
            FinderKind::S4 => "find_s4".into(),
            FinderKind::P2K2K2 => "find_p2_k2_k2".into(),
            FinderKind::P2P2 => "find_p2_p2".into(),
            FinderKind::Star(t) => format!("find_star({t})"),
            FinderKind::I4 => "find_i4".into(),
            FinderKind::Matching56(t) => format!("find_matching_56({t})"),
            FinderKind::MatchingLarge(t) => format!("find_matching_large({t})"),
            FinderKind::P2ThreeK2 => "find_p2_3k2".into(),
            FinderKind::C4 => "find_c4".into(),
            FinderKind::Clique(r) => format!("find_clique({r})"),
            FinderKind::CompleteBipartite(s, t) => format!("find_complete_bipartite({s},{t})"),
        }
    }

    pub fn run(&self, family: &ColoringFamily, cfg: &FinderConfig) -> Result<FinderOutcome> {
        match *self {
            FinderKind::P4 => find_p4(family, cfg),
            FinderKind::S4 => find_s4(family, cfg),
            FinderKind::P2K2K2 => find_p2_k2_k2(family, cfg),
            FinderKind::P2P2 => find_p2_p2(family, cfg),
            FinderKind::Star(t) => find_star(family, t, cfg),
            FinderKind::I4 => find_i4(family, cfg),
            FinderKind::Matching56(t) => find_matching_56(family, t, cfg),
            FinderKind::MatchingLarge(t) => find_matching_large(family, t, cfg),
            FinderKind::P2ThreeK2 => find_p2_3k2(family, cfg),
            FinderKind::C4 => find_c4(family, cfg),
            FinderKind::Clique(r) => find_clique(family, r, cfg),
            FinderKind::CompleteBipartite(s, t) => find_complete_bipartite(family, s, t, cfg),
        }
    }

    /// The dedicated finder for a pattern, by structure (names are ignored).
    pub fn for_pattern(h: &PatternGraph) -> Option<FinderKind> {
        let (v, e) = (h.num_vertices(), h.num_edges());
        let mut candidates = vec![
            FinderKind::P4,
            FinderKind::S4,
            FinderKind::P2K2K2,
            FinderKind::P2P2,
            FinderKind::I4,
            FinderKind::P2ThreeK2,
            FinderKind::C4,
        ];
        if e >= 5 && v == e + 1 {
            candidates.push(FinderKind::Star(e));
        }
        if e >= 5 && v == 2 * e {
            candidates.push(if e <= 6 { FinderKind::Matching56(e) } else { FinderKind::MatchingLarge(e) });
        }
        if v >= 8 && e == v * (v - 1) / 2 {
            candidates.push(FinderKind::Clique(v));
        }
        for s in 7..=v.saturating_sub(7) {
            if s <= v - s && s * (v - s) == e {
                candidates.push(FinderKind::CompleteBipartite(s, v - s));
            }
        }
        candidates.into_iter().find(|c| {
            let p = c.pattern();
            p.num_vertices() == v && p.num_edges() == e && p.is_isomorphic(h)
        })
    }

    /// Rejects sizes outside the finder's range.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        match *self {
            FinderKind::Star(t) if t < 5 => bad("find_star needs t >= 5 (use find_s4 for t = 4)"),
            FinderKind::Matching56(t) if !(5..=6).contains(&t) => {
                bad("find_matching_56 needs t in {5, 6}")
            }
            FinderKind::MatchingLarge(t) if t < 7 => bad("find_matching_large needs t >= 7"),
            FinderKind::Clique(r) if r < 8 => bad("find_clique needs r >= 8"),
            FinderKind::CompleteBipartite(s, t) if s < 7 || t < 7 => {
                bad("find_complete_bipartite needs s, t >= 7")
            }
            _ => Ok(()),
        }
    }
}

/// Runs the finder matching `h`: a dedicated finder, a dedicated finder plus
/// slack for `X + rK1`, or [`generic_find`] for other patterns with at least
/// six edges.
pub fn find(family: &ColoringFamily, h: &PatternGraph, cfg: &FinderConfig) -> Result<FinderOutcome> {
    if h.num_vertices() > family.n() {
        return Err(Error::PatternLargerThanHost { pattern: h.num_vertices(), host: family.n() });
    }
    if let Some(kind) = FinderKind::for_pattern(h) {
        return kind.run(family, cfg);
    }
    let isolated = h.isolated_count();
    if isolated > 0 {
        let core = strip_isolated(h)?;
        if let Some(kind) = FinderKind::for_pattern(&core) {
            let mut out = kind.run(family, cfg)?;
            if let FinderResult::Success(av) = &out.result {
                out.diagnostics.notes.push(format!("{isolated} isolated vertices drawn from slack"));
                match extend_with_slack(family, av, h) {
                    Ok(cert) => {
                        out.result = FinderResult::Success(AnchoredViolation {
                            slack: crate::finders::without(&av.slack, cert.host_vertices()),
                            anchor: av.anchor,
                            certificate: cert,
                        });
                    }
                    Err(Error::SlackTooSmall { needed, available }) => {
                        out.diagnostics.stages.push(StageRecord {
                            name: "slack".into(),
                            found: available as u64,
                            required: needed as u64,
                            coverage: None,
                        });
                        out.result = FinderResult::ThresholdNotMet(ThresholdNotMet {
                            stage: "slack".into(),
                            found: available as u64,
                            required: needed as u64,
                        });
                    }
                    Err(e) => return Err(e),
                }
            }
            return Ok(out);
        }
    }
    if h.num_edges() >= 6 {
        return generic_find(family, h, cfg);
    }
    Err(Error::InvalidParameter(format!(
        "no finder for {}: patterns with fewer than 6 edges need a dedicated finder",
        h.label()
    )))
}

/// `h` without its isolated vertices.
pub fn strip_isolated(h: &PatternGraph) -> Result<PatternGraph> {
    let deg = h.degrees();
    let mut relabel = vec![usize::MAX; h.num_vertices()];
    let mut next = 0;
    for (v, &d) in deg.iter().enumerate() {
        if d > 0 {
            relabel[v] = next;
            next += 1;
        }
    }
    PatternGraph::new(next, h.edges().iter().map(|&(a, b)| (relabel[a], relabel[b])).collect())
}
