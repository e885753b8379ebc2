//! Finders on a bipartition (`C_4`, `K_r`) or a clique layout (`K_{s,t}`).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::extract::{bipartition_layout, bipartition_triple_count, split_orders};
use crate::model::{Anchor, ColoringFamily, Edge, PatternTag};
use crate::pigeonhole::{best_pair, largest_bucket, peel, Peeling};

use super::star::check_host;
use super::{assemble, without, FinderConfig, FinderKind, FinderOutcome, Run, Stop, Step};

/// Halves of the first even number of host vertices, using the split order
/// with the most collisions.
pub(crate) fn bipartition_base(run: &mut Run) -> (Vec<usize>, Vec<usize>) {
    let used = run.family.n() / 2 * 2;
    if used < run.family.n() {
        run.note(format!("using the first {used} host vertices"));
    }
    let orders = split_orders(used, run.cfg.split);
    let mut best: Option<(u64, (Vec<usize>, Vec<usize>))> = None;
    for o in &orders {
        let layout = bipartition_layout(o, used / 2);
        if orders.len() == 1 {
            return layout;
        }
        let c = bipartition_triple_count(run.family, &layout.0, &layout.1);
        if best.as_ref().is_none_or(|b| c > b.0) {
            best = Some((c, layout));
        }
    }
    best.unwrap().1
}

/// Best pair `(b1, b2)` in the first `pair_pool` vertices of `B` and the
/// owners `a` in `A` with `f_a(ab1) = f_a(ab2)`.
fn bipartition_pair(run: &mut Run, need: usize) -> Step<(usize, usize, Vec<usize>)> {
    let (a, b) = bipartition_base(run);
    let q = run.cfg.pair_pool.min(b.len());
    run.stage("pool", q, 2)?;
    let sel = best_pair(&a, q, |x, i| run.family.color(x, x, b[i])).expect("pool >= 2");
    run.stage("pair", sel.owners.len(), need)?;
    Ok((b[sel.indices[0]], b[sel.indices[1]], sel.owners))
}

/// All pairs of the first `cap` vertices of `v`, lexicographic.
fn edges_within(v: &[usize], cap: usize) -> Vec<Edge> {
    let v = &v[..v.len().min(cap)];
    let mut out = Vec::with_capacity(v.len() * v.len().saturating_sub(1) / 2);
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            out.push(Edge::new(v[i], v[j]));
        }
    }
    out
}

fn peel_edges(run: &mut Run, name: &str, edges: &[Edge], owner: usize, m: usize) -> Step<Peeling> {
    let keys: Vec<u32> = edges.iter().map(|&e| run.color(owner, e)).collect();
    let p = peel(&keys, m);
    run.peel_stage(name, &p)?;
    Ok(p)
}

fn group_of(p: &Peeling, i: usize) -> &[usize] {
    &p.groups[p.member[i].expect("intersected index is covered")]
}

/// `C_4` on `a1 b1 a2 b2`.
pub fn find_c4(family: &ColoringFamily, cfg: &FinderConfig) -> Result<FinderOutcome> {
    check_host(family, FinderKind::C4)?;
    let mut run = Run::new("find_c4", family, cfg);
    let r = (|| -> Step<_> {
        let (b1, b2, a) = bipartition_pair(&mut run, 2)?;
        let (_, bucket) =
            largest_bucket(&a, |x| (run.color(b1, Edge::new(b1, x)), run.color(b2, Edge::new(b2, x)))).unwrap();
        run.stage("bucket_b1_b2", bucket.len(), 2)?;
        Ok([bucket[0], b1, bucket[1], b2])
    })();
    let map = match r {
        Ok(v) => v,
        Err(e) => return run.finish(Err(e)),
    };
    let [a1, b1, a2, b2] = map;
    let e = Edge::new;
    let collisions = vec![(e(a1, b1), e(a1, b2)), (e(b1, a1), e(b1, a2)), (e(a2, b1), e(a2, b2)), (e(b2, a1), e(b2, a2))];
    let av = assemble(family, PatternTag::Cycle(4), map.to_vec(), collisions, None, Vec::new());
    run.finish(av.map_err(Into::into))
}

/// `K_r`, `r >= 8`: two triple systems over the edges inside `A'` (under `f_{b1}`
/// and `f_{b2}`) share `e1`; its partners and padding give the other vertices.
/// Slack vertices join through both hubs `b1`, `b2`.
pub fn find_clique(family: &ColoringFamily, r: usize, cfg: &FinderConfig) -> Result<FinderOutcome> {
    check_host(family, FinderKind::Clique(r))?;
    let mut run = Run::new(&FinderKind::Clique(r).name(), family, cfg);
    let res = (|| -> Step<_> {
        let (b1, b2, a) = bipartition_pair(&mut run, r - 2)?;
        let edges = edges_within(&a, run.cfg.peel_vertices);
        let f1 = peel_edges(&mut run, "peel_b1", &edges, b1, 3)?;
        let f2 = peel_edges(&mut run, "peel_b2", &edges, b2, 3)?;
        let i = run.intersect(&[&f1, &f2])?;
        let j = *group_of(&f1, i).iter().find(|&&x| x != i).unwrap();
        let l = *group_of(&f2, i).iter().find(|&&x| x != i && x != j).unwrap();
        let mut verts: Vec<usize> = Vec::new();
        for x in [i, j, l] {
            for v in [edges[x].0, edges[x].1] {
                if !verts.contains(&v) {
                    verts.push(v);
                }
            }
        }
        let pads: Vec<usize> = without(&a, &verts).into_iter().take((r - 2).saturating_sub(verts.len())).collect();
        verts.extend(pads);
        run.stage("pad", verts.len(), r - 2)?;
        let slack = without(&a, &verts);
        Ok((b1, b2, verts, (edges[i], edges[j], edges[l]), slack))
    })();
    let (b1, b2, verts, (e1, e2, e3), slack) = match res {
        Ok(v) => v,
        Err(e) => return run.finish(Err(e)),
    };
    let mut map = vec![b1, b2];
    map.extend(&verts);
    let mut collisions = vec![(e1, e2), (e1, e3)];
    collisions.extend(verts.iter().map(|&v| (Edge::new(v, b1), Edge::new(v, b2))));
    let av = assemble(family, PatternTag::Clique(r), map, collisions, Some(Anchor::Hub(b1, b2)), slack);
    run.finish(av.map_err(Into::into))
}

/// Two-coloring of the graph on `verts` with `edges`, as components
/// `(side 0, side 1)` in first-seen order. `None` if some component has an odd
/// cycle.
fn two_color(verts: &[usize], edges: &[Edge]) -> Option<Vec<(Vec<usize>, Vec<usize>)>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = verts.iter().map(|&v| (v, Vec::new())).collect();
    for e in edges {
        adj.entry(e.0).or_default().push(e.1);
        adj.entry(e.1).or_default().push(e.0);
    }
    let mut side: BTreeMap<usize, bool> = BTreeMap::new();
    let mut comps = Vec::new();
    let order: Vec<usize> = verts.iter().copied().chain(edges.iter().flat_map(|e| [e.0, e.1])).collect();
    for &start in &order {
        if side.contains_key(&start) {
            continue;
        }
        let mut comp = (Vec::new(), Vec::new());
        side.insert(start, false);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let su = side[&u];
            if su {
                comp.1.push(u);
            } else {
                comp.0.push(u);
            }
            for &w in &adj[&u] {
                match side.get(&w) {
                    Some(&sw) if sw == su => return None,
                    Some(_) => {}
                    None => {
                        side.insert(w, !su);
                        stack.push(w);
                    }
                }
            }
        }
        comps.push(comp);
    }
    Some(comps)
}

/// Orients components so that exactly `s` vertices land on side one.
fn orient(comps: &[(Vec<usize>, Vec<usize>)], s: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    // reach[c][x]: the first c components can put exactly x vertices on side one
    let mut reach = vec![vec![false; s + 1]; comps.len() + 1];
    reach[0][0] = true;
    for (c, (p, q)) in comps.iter().enumerate() {
        for x in 0..=s {
            if reach[c][x] {
                for d in [p.len(), q.len()] {
                    if x + d <= s {
                        reach[c + 1][x + d] = true;
                    }
                }
            }
        }
    }
    if !reach[comps.len()][s] {
        return None;
    }
    let (mut one, mut two) = (Vec::new(), Vec::new());
    let mut x = s;
    for c in (0..comps.len()).rev() {
        let (p, q) = &comps[c];
        if x >= p.len() && reach[c][x - p.len()] {
            one.extend(p);
            two.extend(q);
            x -= p.len();
        } else {
            one.extend(q);
            two.extend(p);
            x -= q.len();
        }
    }
    Some((one, two))
}

/// `K_{s,t}`, `s, t >= 7`. A best pair of edges `e1, e2` inside `L` and its
/// owner set `V'`; four edge systems over `E(V')` (sizes 2, 7, 16, 29 under
/// the four endpoint colorings) share `e^1`, and partners are picked so that
/// the special edges stay bipartite.
pub fn find_complete_bipartite(
    family: &ColoringFamily,
    s: usize,
    t: usize,
    cfg: &FinderConfig,
) -> Result<FinderOutcome> {
    let kind = FinderKind::CompleteBipartite(s, t);
    check_host(family, kind)?;
    let mut run = Run::new(&kind.name(), family, cfg);
    let res = (|| -> Step<_> {
        let used = run.family.n() / 3 * 3;
        if used < run.family.n() {
            run.note(format!("using the first {used} host vertices"));
        }
        let n = used / 3;
        let order = split_orders(used, run.cfg.split).swap_remove(0);
        let (x, l) = (&order[..n], &order[n..3 * n]);
        let pool = edges_within(l, run.cfg.edge_pool_vertices);
        run.stage("pool", pool.len(), 2)?;
        let sel = best_pair(x, pool.len(), |b, i| run.family.color_of(b, pool[i])).expect("pool >= 2");
        run.stage("pair", sel.owners.len(), s + t - 4)?;
        let (e1, e2) = (pool[sel.indices[0]], pool[sel.indices[1]]);
        let (v1, v2) = (e1.0, e1.1);
        let (u1, u2) = if e1.shares_vertex(&e2) {
            let u1 = if e1.touches(e2.0) { e2.1 } else { e2.0 };
            let u2 = *l.iter().filter(|w| ![v1, v2, u1].contains(w)).min().expect("|L| >= 4");
            run.note(format!("e1 and e2 share a vertex; u2 = {u2}"));
            (u1, u2)
        } else {
            (e2.0, e2.1)
        };
        let vr = sel.owners;
        let edges = edges_within(&vr, run.cfg.peel_vertices);
        let systems = [
            peel_edges(&mut run, "peel_v1", &edges, v1, 2)?,
            peel_edges(&mut run, "peel_v2", &edges, v2, 7)?,
            peel_edges(&mut run, "peel_u1", &edges, u1, 16)?,
            peel_edges(&mut run, "peel_u2", &edges, u2, 29)?,
        ];
        let refs: Vec<&Peeling> = systems.iter().collect();
        let i = run.intersect(&refs)?;
        let mut special = vec![edges[i]];
        for sys in &systems {
            let pick = group_of(sys, i).iter().map(|&j| edges[j]).find(|&c| {
                c != edges[i] && {
                    let mut trial = special.clone();
                    trial.push(c);
                    two_color(&[], &trial).is_some()
                }
            });
            match pick {
                Some(c) => special.push(c),
                None => return Err(Stop::Fail(Error::Internal("no bipartite partner edge".into()))),
            }
        }
        let mut a_verts: Vec<usize> = Vec::new();
        for e in &special {
            for v in [e.0, e.1] {
                if !a_verts.contains(&v) {
                    a_verts.push(v);
                }
            }
        }
        let pads: Vec<usize> =
            without(&vr, &a_verts).into_iter().take((s + t - 4).saturating_sub(a_verts.len())).collect();
        a_verts.extend(pads);
        run.stage("pad", a_verts.len(), s + t - 4)?;
        let named = [v1, v2, u1, u2];
        let mut all_edges = special.clone();
        all_edges.extend([e1, e2]);
        let verts: Vec<usize> = named.iter().chain(&a_verts).copied().collect();
        let comps = two_color(&verts, &all_edges)
            .ok_or_else(|| Stop::Fail(Error::Internal("special edges are not bipartite".into())))?;
        let (one, two) = orient(&comps, s)
            .ok_or_else(|| Stop::Fail(Error::Internal("no side assignment of the required sizes".into())))?;
        let slack = without(&vr, &a_verts);
        Ok((one, two, named, special, (e1, e2), slack))
    })();
    let (one, two, named, special, (e1, e2), slack) = match res {
        Ok(v) => v,
        Err(e) => return run.finish(Err(e)),
    };
    let pair_of = |v: usize| match named.iter().position(|&w| w == v) {
        Some(k) => (special[0], special[k + 1]),
        None => (e1, e2),
    };
    let map: Vec<usize> = one.into_iter().chain(two).collect();
    let collisions = map.iter().map(|&v| pair_of(v)).collect();
    let av = assemble(family, PatternTag::CompleteBipartite(s, t), map, collisions, Some(Anchor::Edges(e1, e2)), slack);
    run.finish(av.map_err(Into::into))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_color_detects_odd_cycles() {
        let tri = [Edge::new(0, 1), Edge::new(1, 2), Edge::new(0, 2)];
        assert!(two_color(&[], &tri).is_none());
        let path = [Edge::new(0, 1), Edge::new(1, 2)];
        let comps = two_color(&[7], &path).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], (vec![7], vec![]));
    }

    #[test]
    fn orient_hits_exact_sizes() {
        let comps = vec![(vec![0, 1], vec![2]), (vec![3], vec![]), (vec![4], vec![5, 6])];
        for s in 0..=7 {
            let got = orient(&comps, s);
            let brute = (0..8u32).any(|mask| {
                comps.iter().enumerate().map(|(c, (p, q))| if mask >> c & 1 == 1 { q.len() } else { p.len() }).sum::<usize>()
                    == s
            });
            assert_eq!(got.is_some(), brute, "s = {s}");
            if let Some((one, two)) = got {
                assert_eq!(one.len(), s);
                assert_eq!(one.len() + two.len(), 7);
            }
        }
    }
}
