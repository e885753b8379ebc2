//! Matching finders. A matching `M` on two thirds of the host gives a best
//! edge pair `e1 = v1 u1`, `e2 = v2 u2`; the set `A` of outside vertices with
//! `f_p(e1) = f_p(e2)` shares the anchor pair `(e1, e2)`, and a matching `H`
//! on `A` supplies the remaining edges.

use crate::error::Result;
use crate::extract::{matching_layout, matching_triple_count, split_orders};
use crate::model::{Anchor, ColoringFamily, Edge, PatternTag};
use crate::pigeonhole::{best_pair, largest_bucket, peel};

use super::star::check_host;
use super::{assemble, index_matching, without, FinderConfig, FinderKind, FinderOutcome, Run, Step};

pub(crate) struct MatchingBase {
    pub e1: Edge,
    pub e2: Edge,
    pub a: Vec<usize>,
}

/// Picks the split order whose layout has the most collisions (the first
/// order on ties), then the best pair among the first `pair_pool` edges.
pub(crate) fn matching_base(run: &mut Run, need: usize) -> Step<MatchingBase> {
    let used = run.family.n() / 3 * 3;
    let n = used / 3;
    if used < run.family.n() {
        run.note(format!("using the first {used} host vertices"));
    }
    let orders = split_orders(used, run.cfg.split);
    let (y, m) = if orders.len() == 1 {
        matching_layout(&orders[0], n)
    } else {
        let mut best: Option<(u64, (Vec<usize>, Vec<Edge>))> = None;
        for o in &orders {
            let (y, m) = matching_layout(o, n);
            let c = matching_triple_count(run.family, &y, &m);
            if best.as_ref().is_none_or(|b| c > b.0) {
                best = Some((c, (y, m)));
            }
        }
        best.unwrap().1
    };
    let q = run.cfg.pair_pool.min(m.len());
    run.stage("matching", q, 2)?;
    let sel = best_pair(&y, q, |p, i| run.family.color_of(p, m[i])).expect("pool >= 2");
    run.stage("pair", sel.owners.len(), need)?;
    Ok(MatchingBase { e1: m[sel.indices[0]], e2: m[sel.indices[1]], a: sel.owners })
}

fn finish_matching(
    run: Run,
    base: &MatchingBase,
    t: usize,
    h_edges: &[Edge],
    collisions_named: [(Edge, Edge); 4],
) -> Result<FinderOutcome> {
    let (e1, e2) = (base.e1, base.e2);
    let mut map = vec![e1.0, e1.1, e2.0, e2.1];
    for h in h_edges {
        map.extend([h.0, h.1]);
    }
    let mut collisions = collisions_named.to_vec();
    collisions.extend(std::iter::repeat_n((e1, e2), 2 * h_edges.len()));
    let slack = without(&base.a, &map);
    let av = assemble(run.family, PatternTag::Matching(t), map, collisions, Some(Anchor::Edges(e1, e2)), slack);
    run.finish(av.map_err(Into::into))
}

fn owners(b: &MatchingBase) -> [usize; 4] {
    [b.e1.0, b.e1.1, b.e2.0, b.e2.1]
}

/// `I_4`: four successive buckets of `H` under `f_{v1}, f_{u1}, f_{v2}, f_{u2}`.
pub fn find_i4(family: &ColoringFamily, cfg: &FinderConfig) -> Result<FinderOutcome> {
    check_host(family, FinderKind::I4)?;
    let mut run = Run::new("find_i4", family, cfg);
    let r = (|| -> Step<_> {
        let b = matching_base(&mut run, 4)?;
        let mut h = index_matching(&b.a);
        for (i, o) in owners(&b).into_iter().enumerate() {
            let (_, bucket) = largest_bucket(&h, |e| run.color(o, e)).unwrap();
            run.stage(&format!("bucket_{}", ["v1", "u1", "v2", "u2"][i]), bucket.len(), 2)?;
            h = bucket;
        }
        Ok((b, h[0], h[1]))
    })();
    let (b, h1, h2) = match r {
        Ok(v) => v,
        Err(e) => return run.finish(Err(e)),
    };
    finish_matching(run, &b, 4, &[h1, h2], [(h1, h2); 4])
}

/// `I_5` and `I_6`: triple systems on `H` under `(f_{v1}, f_{u1})` and
/// `(f_{v2}, f_{u2})` meet in `h_t`; `I_6` adds one more edge of `H`.
pub fn find_matching_56(family: &ColoringFamily, t: usize, cfg: &FinderConfig) -> Result<FinderOutcome> {
    check_host(family, FinderKind::Matching56(t))?;
    let mut run = Run::new(&FinderKind::Matching56(t).name(), family, cfg);
    let r = (|| -> Step<_> {
        let b = matching_base(&mut run, 2 * (t - 2))?;
        let h = index_matching(&b.a);
        let [v1, u1, v2, u2] = owners(&b);
        let k1: Vec<_> = h.iter().map(|&e| (run.color(v1, e), run.color(u1, e))).collect();
        let k2: Vec<_> = h.iter().map(|&e| (run.color(v2, e), run.color(u2, e))).collect();
        let f1 = peel(&k1, 3);
        run.peel_stage("peel_v1_u1", &f1)?;
        let f2 = peel(&k2, 3);
        run.peel_stage("peel_v2_u2", &f2)?;
        let i = run.intersect(&[&f1, &f2])?;
        let j = *f1.groups[f1.member[i].unwrap()].iter().find(|&&x| x != i).unwrap();
        let m = *f2.groups[f2.member[i].unwrap()].iter().find(|&&x| x != i && x != j).unwrap();
        let mut picked = vec![h[i], h[j], h[m]];
        if t == 6 {
            let extra = (0..h.len()).find(|x| ![i, j, m].contains(x));
            run.stage("pad", picked.len() + extra.is_some() as usize, t - 2)?;
            picked.push(h[extra.unwrap()]);
        }
        Ok((b, picked))
    })();
    let (b, picked) = match r {
        Ok(v) => v,
        Err(e) => return run.finish(Err(e)),
    };
    let (ht, hj, hm) = (picked[0], picked[1], picked[2]);
    finish_matching(run, &b, t, &picked, [(ht, hj), (ht, hj), (ht, hm), (ht, hm)])
}

/// `I_t`, `t >= 7`: four quintuple systems on `H`, one per named vertex, share
/// `h_t`; each contributes a partner, all pairwise distinct.
pub fn find_matching_large(family: &ColoringFamily, t: usize, cfg: &FinderConfig) -> Result<FinderOutcome> {
    check_host(family, FinderKind::MatchingLarge(t))?;
    let mut run = Run::new(&FinderKind::MatchingLarge(t).name(), family, cfg);
    let r = (|| -> Step<_> {
        let b = matching_base(&mut run, 2 * (t - 2))?;
        let h = index_matching(&b.a);
        let names = ["v1", "u1", "v2", "u2"];
        let mut systems = Vec::with_capacity(4);
        for (o, name) in owners(&b).into_iter().zip(names) {
            let keys: Vec<u32> = h.iter().map(|&e| run.color(o, e)).collect();
            let f = peel(&keys, 5);
            run.peel_stage(&format!("peel_{name}"), &f)?;
            systems.push(f);
        }
        let refs: Vec<_> = systems.iter().collect();
        let i = run.intersect(&refs)?;
        let mut chosen = vec![i];
        for f in &systems {
            let p = *f.groups[f.member[i].unwrap()].iter().find(|x| !chosen.contains(x)).unwrap();
            chosen.push(p);
        }
        let pads: Vec<usize> = (0..h.len()).filter(|x| !chosen.contains(x)).take(t - 7).collect();
        run.stage("pad", chosen.len() + pads.len(), t - 2)?;
        chosen.extend(pads);
        Ok((b, chosen.into_iter().map(|x| h[x]).collect::<Vec<_>>()))
    })();
    let (b, picked) = match r {
        Ok(v) => v,
        Err(e) => return run.finish(Err(e)),
    };
    let ht = picked[0];
    finish_matching(run, &b, t, &picked, [(ht, picked[1]), (ht, picked[2]), (ht, picked[3]), (ht, picked[4])])
}
