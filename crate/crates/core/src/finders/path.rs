//! `P_4` on `{b1, a1, b2, a2, b3}` from a balanced bipartition `A | B`.

use crate::error::Result;
use crate::model::{ColoringFamily, Edge, PatternTag};
use crate::pigeonhole::{best_triple, largest_bucket, min_triples, triple_collisions};

use super::dense::bipartition_base;
use super::star::check_host;
use super::{assemble, FinderConfig, FinderKind, FinderOutcome, Run, Step};

pub fn find_p4(family: &ColoringFamily, cfg: &FinderConfig) -> Result<FinderOutcome> {
    check_host(family, FinderKind::P4)?;
    let mut run = Run::new("find_p4", family, cfg);
    let r = (|| -> Step<_> {
        let (a, b) = bipartition_base(&mut run);
        let n = a.len();
        let mut colors = Vec::with_capacity(n);
        let quads: u64 = a
            .iter()
            .map(|&x| {
                colors.clear();
                colors.extend(b.iter().map(|&y| run.family.color(x, x, y)));
                triple_collisions(&mut colors)
            })
            .sum();
        let floor = n as u64 * min_triples(n as u64, run.family.k() as u64);
        run.stage("quadruples", quads as usize, floor as usize)?;
        let q = run.cfg.triple_pool.min(n);
        run.stage("pool", q, 3)?;
        let sel = best_triple(&a, q, |x, i| run.family.color(x, x, b[i])).expect("pool >= 3");
        run.stage("triple", sel.owners.len(), 2)?;
        let [b1, b2, b3] = [b[sel.indices[0]], b[sel.indices[1]], b[sel.indices[2]]];
        let (_, bucket) = largest_bucket(&sel.owners, |x| {
            let e = Edge::new(b2, x);
            (run.color(b1, e), run.color(b2, e), run.color(b3, e))
        })
        .unwrap();
        run.stage("bucket_b", bucket.len(), 2)?;
        Ok([b1, bucket[0], b2, bucket[1], b3])
    })();
    let map = match r {
        Ok(v) => v,
        Err(e) => return run.finish(Err(e)),
    };
    let [b1, a1, b2, a2, b3] = map;
    let mid = (Edge::new(a1, b2), Edge::new(a2, b2));
    let collisions = vec![
        mid,
        (Edge::new(a1, b1), Edge::new(a1, b2)),
        mid,
        (Edge::new(a2, b2), Edge::new(a2, b3)),
        mid,
    ];
    let av = assemble(family, PatternTag::Path(4), map.to_vec(), collisions, None, Vec::new());
    run.finish(av.map_err(Into::into))
}
