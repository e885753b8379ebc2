//! Patterns with at least six edges: find a small member of the six-graph
//! family inside the pattern, certify the member, then lift.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{subgraph_contains, AnchoredViolation, ColoringFamily, PatternGraph};
use crate::verify::{extend_violation, extend_with_slack, family_is_good_with_limit};

use super::{
    without, FinderConfig, FinderKind, FinderOutcome, FinderResult, StageRecord, ThresholdNotMet,
};

/// Members in preference order; the first four come with a common anchor pair.
pub fn h6_members() -> [FinderKind; 6] {
    [
        FinderKind::I4,
        FinderKind::S4,
        FinderKind::P2P2,
        FinderKind::P2K2K2,
        FinderKind::P4,
        FinderKind::C4,
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H6Member {
    pub kind: FinderKind,
    /// `map[p]` is the pattern vertex hosting member vertex `p`.
    pub map: Vec<usize>,
}

/// The first member (in preference order) that is a subgraph of `h`.
pub fn detect_h6_member(h: &PatternGraph) -> Result<H6Member> {
    if h.num_edges() < 6 {
        return Err(Error::InvalidParameter(format!(
            "{} has {} edges; member detection needs at least 6",
            h.label(),
            h.num_edges()
        )));
    }
    for kind in h6_members() {
        if let Some(map) = subgraph_contains(h, &kind.pattern()) {
            return Ok(H6Member { kind, map });
        }
    }
    Err(Error::Internal(format!("{} contains no six-graph member", h.label())))
}

fn refuse(out: &mut FinderOutcome, stage: &str, found: u64, required: u64) {
    out.diagnostics.stages.push(StageRecord { name: stage.into(), found, required, coverage: None });
    out.result = FinderResult::ThresholdNotMet(ThresholdNotMet { stage: stage.into(), found, required });
}

/// Certifies `h` (at least six edges) through its preferred member, then lifts
/// the certificate: directly when the vertex counts agree, through slack when
/// the member has an anchor, and by bounded brute force otherwise.
pub fn generic_find(family: &ColoringFamily, h: &PatternGraph, cfg: &FinderConfig) -> Result<FinderOutcome> {
    if h.num_vertices() > family.n() {
        return Err(Error::PatternLargerThanHost { pattern: h.num_vertices(), host: family.n() });
    }
    if let Some(kind @ (FinderKind::Clique(_) | FinderKind::CompleteBipartite(..))) = FinderKind::for_pattern(h) {
        return kind.run(family, cfg);
    }
    let member = detect_h6_member(h)?;
    let mut out = member.kind.run(family, cfg)?;
    out.diagnostics.member = Some(member.kind.pattern().label());
    out.diagnostics.finder = format!("generic_find via {}", out.diagnostics.finder);
    let av = match &out.result {
        FinderResult::Success(av) => av.clone(),
        FinderResult::ThresholdNotMet(_) => return Ok(out),
    };
    if member.kind.pattern().num_vertices() == h.num_vertices() {
        let cert = extend_violation(family, &av.certificate, h)?;
        out.result = FinderResult::Success(AnchoredViolation { certificate: cert, anchor: None, slack: Vec::new() });
        return Ok(out);
    }
    if av.anchor.is_some() {
        match extend_with_slack(family, &av, h) {
            Ok(cert) => {
                let slack = without(&av.slack, cert.host_vertices());
                out.result = FinderResult::Success(AnchoredViolation { certificate: cert, anchor: av.anchor, slack });
            }
            Err(Error::SlackTooSmall { needed, available }) => {
                refuse(&mut out, "slack", available as u64, needed as u64)
            }
            Err(e) => return Err(e),
        }
        return Ok(out);
    }
    out.diagnostics.fallback = true;
    out.diagnostics
        .notes
        .push(format!("{} certificate has no common anchor; brute-force search over copies", member.kind.name()));
    let report = family_is_good_with_limit(family, h, cfg.fallback_max_copies)?;
    match report.witness {
        Some(cert) => {
            out.diagnostics.stages.push(StageRecord {
                name: "fallback".into(),
                found: 1,
                required: 1,
                coverage: None,
            });
            out.result = FinderResult::Success(AnchoredViolation { certificate: cert, anchor: None, slack: Vec::new() });
        }
        None => refuse(&mut out, "fallback", 0, 1),
    }
    Ok(out)
}
