//! Finders built on a monochromatic star `x -> S` and a best leaf pair
//! `(s, s')`: the set `A` of outside vertices `p` with `f_p(xs) = f_p(xs')`
//! shares the anchor pair `(xs, xs')`.

use crate::error::{Error, Result};
use crate::extract::{star_extract, CenterChoice, StarOptions};
use crate::model::{Anchor, ColoringFamily, Edge, PatternTag};
use crate::pigeonhole::{best_pair, largest_bucket, peel};

use super::{assemble, index_matching, without, FinderConfig, FinderKind, FinderOutcome, Run, Step};

pub(crate) struct StarBase {
    pub x: usize,
    pub s: usize,
    pub s2: usize,
    /// Vertices `p` outside the star with `f_p(xs) = f_p(xs')`.
    pub a: Vec<usize>,
}

impl StarBase {
    pub fn anchor(&self) -> (Edge, Edge) {
        (Edge::new(self.x, self.s), Edge::new(self.x, self.s2))
    }
}

pub(crate) fn check_host(family: &ColoringFamily, kind: FinderKind) -> Result<()> {
    kind.validate()?;
    let v = kind.pattern().num_vertices();
    if family.n() < v {
        return Err(Error::PatternLargerThanHost { pattern: v, host: family.n() });
    }
    Ok(())
}

/// Star extraction, then the best pair of star leaves; `need` is the least
/// useful `|A|`.
pub(crate) fn star_base(run: &mut Run, need: usize) -> Step<StarBase> {
    let n = run.family.n();
    let cap = run.cfg.pair_pool.min((n - 1) / 2).max(1);
    let ex = star_extract(
        run.family,
        &StarOptions { center: CenterChoice::Budget(run.cfg.center_budget), max_star: Some(cap) },
    )?;
    run.stage("star", ex.s.len(), 2)?;
    let x = ex.x;
    let sel = best_pair(&ex.p, ex.s.len(), |p, i| run.family.color(p, x, ex.s[i])).expect("|S| >= 2");
    run.stage("pair", sel.owners.len(), need)?;
    Ok(StarBase { x, s: ex.s[sel.indices[0]], s2: ex.s[sel.indices[1]], a: sel.owners })
}

fn finish_star(
    run: Run,
    base: &StarBase,
    tag: PatternTag,
    map: Vec<usize>,
    collisions: Vec<(Edge, Edge)>,
) -> Result<FinderOutcome> {
    let (xs, xs2) = base.anchor();
    let slack = without(&base.a, &map);
    let av = assemble(run.family, tag, map, collisions, Some(Anchor::Edges(xs, xs2)), slack);
    run.finish(av.map_err(Into::into))
}

/// `S_4` on `{x, s, s', a, a'}` centered at `x`.
pub fn find_s4(family: &ColoringFamily, cfg: &FinderConfig) -> Result<FinderOutcome> {
    check_host(family, FinderKind::S4)?;
    let mut run = Run::new("find_s4", family, cfg);
    let r = (|| -> Step<_> {
        let b = star_base(&mut run, 2)?;
        let (_, a1) = largest_bucket(&b.a, |a| run.color(b.s, Edge::new(b.x, a))).unwrap();
        run.stage("bucket_s", a1.len(), 2)?;
        let (_, a2) = largest_bucket(&a1, |a| run.color(b.s2, Edge::new(b.x, a))).unwrap();
        run.stage("bucket_s2", a2.len(), 2)?;
        Ok((b, a2[0], a2[1]))
    })();
    let (b, a, a2) = match r {
        Ok(v) => v,
        Err(e) => return run.finish(Err(e)),
    };
    let (xs, xs2) = b.anchor();
    let (xa, xa2) = (Edge::new(b.x, a), Edge::new(b.x, a2));
    let collisions = vec![(xs, xs2), (xa, xa2), (xa, xa2), (xs, xs2), (xs, xs2)];
    finish_star(run, &b, PatternTag::Star(4), vec![b.x, b.s, b.s2, a, a2], collisions)
}

/// `P_2 + K_2 + K_2`: the path `s x s'` and two edges of a matching on `A`
/// that look alike to both `s` and `s'`.
pub fn find_p2_k2_k2(family: &ColoringFamily, cfg: &FinderConfig) -> Result<FinderOutcome> {
    check_host(family, FinderKind::P2K2K2)?;
    let mut run = Run::new("find_p2_k2_k2", family, cfg);
    let r = (|| -> Step<_> {
        let b = star_base(&mut run, 4)?;
        let h = index_matching(&b.a);
        let (_, bucket) = largest_bucket(&h, |e| (run.color(b.s, e), run.color(b.s2, e))).unwrap();
        run.stage("bucket_s_s2", bucket.len(), 2)?;
        Ok((b, bucket[0], bucket[1]))
    })();
    let (b, e1, e2) = match r {
        Ok(v) => v,
        Err(e) => return run.finish(Err(e)),
    };
    let (xs, xs2) = b.anchor();
    let map = vec![b.s, b.x, b.s2, e1.0, e1.1, e2.0, e2.1];
    let collisions = vec![(e1, e2), (xs, xs2), (e1, e2), (xs, xs2), (xs, xs2), (xs, xs2), (xs, xs2)];
    finish_star(run, &b, FinderKind::P2K2K2.tag(), map, collisions)
}

/// `P_2 + P_2`: the path `s x s'` and a path `a p b` at a fixed `p` in `A`.
pub fn find_p2_p2(family: &ColoringFamily, cfg: &FinderConfig) -> Result<FinderOutcome> {
    check_host(family, FinderKind::P2P2)?;
    let mut run = Run::new("find_p2_p2", family, cfg);
    let r = (|| -> Step<_> {
        let b = star_base(&mut run, 3)?;
        let p = b.a[0];
        let (_, bucket) = largest_bucket(&b.a[1..], |a| {
            let e = Edge::new(p, a);
            (run.color(b.s, e), run.color(b.s2, e))
        })
        .unwrap();
        run.stage("bucket_s_s2", bucket.len(), 2)?;
        Ok((b, p, bucket[0], bucket[1]))
    })();
    let (b, p, a, c) = match r {
        Ok(v) => v,
        Err(e) => return run.finish(Err(e)),
    };
    let (xs, xs2) = b.anchor();
    let (pa, pc) = (Edge::new(p, a), Edge::new(p, c));
    let map = vec![b.s, b.x, b.s2, a, p, c];
    let collisions = vec![(pa, pc), (xs, xs2), (pa, pc), (xs, xs2), (xs, xs2), (xs, xs2)];
    finish_star(run, &b, FinderKind::P2P2.tag(), map, collisions)
}

/// `S_t`, `t >= 5`: two triple systems on `A` (under `f_s` and `f_{s'}` of the
/// edges `xa`) meet in `p_t`; its partners give the collisions of `s` and `s'`.
pub fn find_star(family: &ColoringFamily, t: usize, cfg: &FinderConfig) -> Result<FinderOutcome> {
    check_host(family, FinderKind::Star(t))?;
    let mut run = Run::new(&FinderKind::Star(t).name(), family, cfg);
    let r = (|| -> Step<_> {
        let b = star_base(&mut run, t - 2)?;
        let keys_s: Vec<u32> = b.a.iter().map(|&a| run.color(b.s, Edge::new(b.x, a))).collect();
        let keys_s2: Vec<u32> = b.a.iter().map(|&a| run.color(b.s2, Edge::new(b.x, a))).collect();
        let f1 = peel(&keys_s, 3);
        run.peel_stage("peel_s", &f1)?;
        let f2 = peel(&keys_s2, 3);
        run.peel_stage("peel_s2", &f2)?;
        let i = run.intersect(&[&f1, &f2])?;
        let g1 = &f1.groups[f1.member[i].unwrap()];
        let g2 = &f2.groups[f2.member[i].unwrap()];
        let k_idx = *g1.iter().find(|&&j| j != i).unwrap();
        let h_idx = *g2.iter().find(|&&j| j != i && j != k_idx).unwrap();
        let mut leaves = vec![b.a[i], b.a[h_idx], b.a[k_idx]];
        leaves.extend(without(&b.a, &leaves).into_iter().take(t - 5));
        run.stage("pad", leaves.len(), t - 2)?;
        Ok((b, leaves))
    })();
    let (b, leaves) = match r {
        Ok(v) => v,
        Err(e) => return run.finish(Err(e)),
    };
    let (xs, xs2) = b.anchor();
    let x_edge = |v: usize| Edge::new(b.x, v);
    let (pt, ph, pk) = (leaves[0], leaves[1], leaves[2]);
    let mut map = vec![b.x, b.s, b.s2];
    map.extend(&leaves);
    let mut collisions = vec![(xs, xs2), (x_edge(pt), x_edge(pk)), (x_edge(pt), x_edge(ph))];
    collisions.extend(std::iter::repeat_n((xs, xs2), leaves.len()));
    finish_star(run, &b, PatternTag::Star(t), map, collisions)
}

/// `P_2 + 3K_2`: the path `s x s'` plus a matching edge `h_t` of `A` and one
/// partner for each of `s`, `s'` from two quintuple systems.
pub fn find_p2_3k2(family: &ColoringFamily, cfg: &FinderConfig) -> Result<FinderOutcome> {
    check_host(family, FinderKind::P2ThreeK2)?;
    let mut run = Run::new("find_p2_3k2", family, cfg);
    run.diag.reconstructed = true;
    let r = (|| -> Step<_> {
        let b = star_base(&mut run, 6)?;
        let h = index_matching(&b.a);
        let keys_s: Vec<u32> = h.iter().map(|&e| run.color(b.s, e)).collect();
        let keys_s2: Vec<u32> = h.iter().map(|&e| run.color(b.s2, e)).collect();
        let f1 = peel(&keys_s, 5);
        run.peel_stage("peel_s", &f1)?;
        let f2 = peel(&keys_s2, 5);
        run.peel_stage("peel_s2", &f2)?;
        let i = run.intersect(&[&f1, &f2])?;
        let j1 = *f1.groups[f1.member[i].unwrap()].iter().find(|&&j| j != i).unwrap();
        let j2 = *f2.groups[f2.member[i].unwrap()].iter().find(|&&j| j != i && j != j1).unwrap();
        Ok((b, h[i], h[j1], h[j2]))
    })();
    let (b, ht, p1, p2) = match r {
        Ok(v) => v,
        Err(e) => return run.finish(Err(e)),
    };
    let (xs, xs2) = b.anchor();
    let map = vec![b.s, b.x, b.s2, ht.0, ht.1, p1.0, p1.1, p2.0, p2.1];
    let mut collisions = vec![(ht, p1), (xs, xs2), (ht, p2)];
    collisions.extend(std::iter::repeat_n((xs, xs2), 6));
    finish_star(run, &b, FinderKind::P2ThreeK2.tag(), map, collisions)
}
