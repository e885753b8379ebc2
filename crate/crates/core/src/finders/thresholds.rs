//! Worst-case stage chains. For a finder, host size and palette size `k`, each
//! stage gets the least value any `k`-coloring family can produce there; if
//! every stage clears its requirement the finder provably succeeds on every
//! such family. `k_hat` is the largest `k` up to which this holds.

use serde::{Deserialize, Serialize};

use crate::pigeonhole::{best_pair_lb, best_triple_lb, bucket_lb, choose2, peel_covered_lb};

use super::{coverage_required, FinderConfig, FinderKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStage {
    pub name: String,
    pub guaranteed: u64,
    pub required: u64,
}

impl ChainStage {
    pub fn holds(&self) -> bool {
        self.guaranteed >= self.required
    }
}

struct Chain<'a> {
    cfg: &'a FinderConfig,
    stages: Vec<ChainStage>,
}

impl Chain<'_> {
    fn push(&mut self, name: &str, guaranteed: u64, required: u64) -> bool {
        self.stages.push(ChainStage { name: name.into(), guaranteed, required });
        guaranteed >= required
    }

    /// Peeling `len` items into `m`-groups over `classes` keys; returns the
    /// worst-case uncovered count inside the ground, or `None` on failure.
    fn peel(&mut self, name: &str, len: u64, classes: u64, m: u64) -> Option<(u64, u64)> {
        let ground = len / m * m;
        let covered = peel_covered_lb(ground, classes, m);
        let ok = self.push(name, covered, coverage_required(ground, self.cfg.coverage));
        ok.then_some((ground, ground - covered))
    }

    /// Systems over the same items share a member when their worst-case
    /// uncovered counts inside the smallest ground sum below it.
    fn intersect(&mut self, systems: &[(u64, u64)]) -> bool {
        let g = systems.iter().map(|s| s.0).min().unwrap_or(0);
        let missing: u64 = systems.iter().map(|s| s.1).sum();
        self.push("intersect", (missing < g) as u64, 1)
    }
}

fn sat_pow(k: u64, e: u32) -> u64 {
    k.saturating_pow(e)
}

/// The worst-case stage chain of `kind` on a host of `host` vertices with `k`
/// colors. Stops after the first failing stage.
pub fn chain(kind: FinderKind, host: usize, k: u32, cfg: &FinderConfig) -> Vec<ChainStage> {
    let mut c = Chain { cfg, stages: Vec::new() };
    let _ = fill(&mut c, kind, host as u64, k as u64);
    c.stages
}

fn fill(c: &mut Chain, kind: FinderKind, host: u64, k: u64) -> Option<()> {
    use FinderKind::*;
    if kind.validate().is_err() {
        c.push("parameters", 0, 1);
        return None;
    }
    let v = kind.pattern().num_vertices() as u64;
    if !c.push("host", host, v) {
        return None;
    }
    let pool = c.cfg.pair_pool as u64;
    match kind {
        S4 | P2K2K2 | P2P2 | Star(_) | P2ThreeK2 => {
            let n = host;
            let s = (n - 1).div_ceil(k).min(pool).min((n - 1) / 2).max(1);
            c.push("star", s, 2).then_some(())?;
            let a = best_pair_lb(n - 1 - s, s, k);
            let need = match kind {
                S4 => 2,
                P2K2K2 => 4,
                P2P2 => 3,
                Star(t) => t as u64 - 2,
                _ => 6,
            };
            c.push("pair", a, need).then_some(())?;
            match kind {
                S4 => {
                    let a1 = bucket_lb(a, k);
                    c.push("bucket_s", a1, 2).then_some(())?;
                    c.push("bucket_s2", bucket_lb(a1, k), 2).then_some(())?;
                }
                P2K2K2 => {
                    c.push("bucket_s_s2", bucket_lb(a / 2, sat_pow(k, 2)), 2).then_some(())?;
                }
                P2P2 => {
                    c.push("bucket_s_s2", bucket_lb(a - 1, sat_pow(k, 2)), 2).then_some(())?;
                }
                Star(_) => {
                    let f1 = c.peel("peel_s", a, k, 3)?;
                    let f2 = c.peel("peel_s2", a, k, 3)?;
                    c.intersect(&[f1, f2]).then_some(())?;
                }
                _ => {
                    let h = a / 2;
                    let f1 = c.peel("peel_s", h, k, 5)?;
                    let f2 = c.peel("peel_s2", h, k, 5)?;
                    c.intersect(&[f1, f2]).then_some(())?;
                }
            }
        }
        I4 | Matching56(_) | MatchingLarge(_) => {
            let n = host / 3;
            let q = pool.min(n);
            c.push("matching", q, 2).then_some(())?;
            let a = best_pair_lb(n, q, k);
            let t = kind.pattern().num_edges() as u64;
            c.push("pair", a, if kind == I4 { 4 } else { 2 * (t - 2) }).then_some(())?;
            let h = a / 2;
            match kind {
                I4 => {
                    let mut b = h;
                    for name in ["bucket_v1", "bucket_u1", "bucket_v2", "bucket_u2"] {
                        b = bucket_lb(b, k);
                        c.push(name, b, 2).then_some(())?;
                    }
                }
                Matching56(_) => {
                    let f1 = c.peel("peel_v1_u1", h, sat_pow(k, 2), 3)?;
                    let f2 = c.peel("peel_v2_u2", h, sat_pow(k, 2), 3)?;
                    c.intersect(&[f1, f2]).then_some(())?;
                }
                _ => {
                    let mut fs = Vec::new();
                    for name in ["peel_v1", "peel_u1", "peel_v2", "peel_u2"] {
                        fs.push(c.peel(name, h, k, 5)?);
                    }
                    c.intersect(&fs).then_some(())?;
                }
            }
        }
        C4 | Clique(_) => {
            let n = host / 2;
            let q = pool.min(n);
            c.push("pool", q, 2).then_some(())?;
            let a = best_pair_lb(n, q, k);
            if let Clique(r) = kind {
                c.push("pair", a, r as u64 - 2).then_some(())?;
                let e = choose2(a.min(c.cfg.peel_vertices as u64));
                let f1 = c.peel("peel_b1", e, k, 3)?;
                let f2 = c.peel("peel_b2", e, k, 3)?;
                c.intersect(&[f1, f2]).then_some(())?;
            } else {
                c.push("pair", a, 2).then_some(())?;
                c.push("bucket_b1_b2", bucket_lb(a, sat_pow(k, 2)), 2).then_some(())?;
            }
        }
        P4 => {
            let n = host / 2;
            let q = (c.cfg.triple_pool as u64).min(n);
            c.push("pool", q, 3).then_some(())?;
            let a = best_triple_lb(n, q, k);
            c.push("triple", a, 2).then_some(())?;
            c.push("bucket_b", bucket_lb(a, sat_pow(k, 3)), 2).then_some(())?;
        }
        CompleteBipartite(s, t) => {
            let n = host / 3;
            let lp = (c.cfg.edge_pool_vertices as u64).min(2 * n);
            let q = choose2(lp);
            c.push("pool", q, 2).then_some(())?;
            let vr = best_pair_lb(n, q, k);
            c.push("pair", vr, (s + t - 4) as u64).then_some(())?;
            let e = choose2(vr.min(c.cfg.peel_vertices as u64));
            let mut fs = Vec::new();
            for (name, m) in [("peel_v1", 2), ("peel_v2", 7), ("peel_u1", 16), ("peel_u2", 29)] {
                fs.push(c.peel(name, e, k, m)?);
            }
            c.intersect(&fs).then_some(())?;
        }
    }
    Some(())
}

/// Whether `kind` provably succeeds on every `k`-coloring family of `host`.
pub fn provable(kind: FinderKind, host: usize, k: u32, cfg: &FinderConfig) -> bool {
    let stages = chain(kind, host, k, cfg);
    !stages.is_empty() && stages.iter().all(ChainStage::holds)
}

/// Largest `k` with [`provable`] for every palette size `1..=k`; `None` if
/// not even `k = 1` is provable.
pub fn k_hat(kind: FinderKind, host: usize, cfg: &FinderConfig) -> Option<u32> {
    let mut best = None;
    for k in 1..=(1u32 << 20) {
        if !provable(kind, host, k, cfg) {
            break;
        }
        best = Some(k);
    }
    best
}

/// Smallest host on which `kind` provably succeeds with one color.
pub fn min_host(kind: FinderKind, cfg: &FinderConfig) -> Option<usize> {
    let v = kind.pattern().num_vertices();
    (v..=100_000).find(|&h| provable(kind, h, 1, cfg))
}
