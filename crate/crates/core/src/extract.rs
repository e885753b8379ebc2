//! Pigeonhole extraction primitives: a monochromatic star, a matching with an
//! outside set, a balanced bipartition and a clique with an outside set, each
//! with a collision count that can be recounted independently.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ColoringFamily, Edge};
use crate::pigeonhole::{choose2, largest_bucket, min_pairs, pair_collisions};
use crate::rng::SplitMix64;

/// How vertex sets are split into the parts an extraction needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    /// Parts are consecutive index blocks.
    #[default]
    Index,
    /// Tries this many rotations of the index order and keeps the best count.
    Rotations(usize),
    /// One seeded shuffle of the index order.
    Seeded(u64),
}

/// Vertex orders a split strategy produces over vertices `0..used`.
pub fn split_orders(used: usize, split: Split) -> Vec<Vec<usize>> {
    let base: Vec<usize> = (0..used).collect();
    match split {
        Split::Index => vec![base],
        Split::Rotations(count) => {
            let count = count.clamp(1, used.max(1));
            let step = used / count;
            (0..count)
                .map(|i| {
                    let mut o = base.clone();
                    o.rotate_left(i * step);
                    o
                })
                .collect()
        }
        Split::Seeded(seed) => {
            let mut o = base;
            SplitMix64::new(seed).shuffle(&mut o);
            vec![o]
        }
    }
}

/// Which star centers to try.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterChoice {
    /// Every vertex; the best count wins (first on ties).
    All,
    Fixed(usize),
    /// Centers in index order while the estimated color reads stay within the
    /// budget; at least one center is always tried.
    Budget(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarOptions {
    pub center: CenterChoice,
    /// Further cap on `|S|` beyond the pigeonhole size.
    pub max_star: Option<usize>,
}

impl Default for StarOptions {
    fn default() -> Self {
        StarOptions { center: CenterChoice::All, max_star: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarExtraction {
    pub x: usize,
    /// The color `f_x` gives every edge `xs`, `s` in `S`.
    pub color: u32,
    pub s: Vec<usize>,
    pub p: Vec<usize>,
    /// Number of `({s, s'}, p)` with `f_p(xs) = f_p(xs')`.
    pub triple_count: u64,
    pub centers_tried: usize,
}

impl StarExtraction {
    /// Re-checks the monochromatic star, the partition and the count.
    pub fn validate(&self, family: &ColoringFamily) -> bool {
        let n = family.n();
        let mut seen = vec![false; n];
        for &v in std::iter::once(&self.x).chain(&self.s).chain(&self.p) {
            if v >= n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        seen.iter().all(|&b| b)
            && self.s.iter().all(|&s| family.color(self.x, self.x, s) == self.color)
            && star_triple_count(family, self.x, &self.s, &self.p) == self.triple_count
    }
}

/// Counts `({s, s'}, p)` with `f_p(xs) = f_p(xs')` by bucketing per `p`.
pub fn star_triple_count(family: &ColoringFamily, x: usize, s: &[usize], p: &[usize]) -> u64 {
    let mut colors = Vec::with_capacity(s.len());
    p.iter()
        .map(|&q| {
            colors.clear();
            colors.extend(s.iter().map(|&v| family.color(q, x, v)));
            pair_collisions(&mut colors)
        })
        .sum()
}

/// Target star size `ceil((n - 1) / k)`, optionally capped.
pub fn star_size(n: usize, k: u32, max_star: Option<usize>) -> usize {
    let s = (n - 1).div_ceil(k as usize);
    max_star.map_or(s, |m| s.min(m))
}

fn star_at(family: &ColoringFamily, x: usize, target: usize) -> StarExtraction {
    let n = family.n();
    let others: Vec<usize> = (0..n).filter(|&v| v != x).collect();
    let (color, mut members) = largest_bucket(&others, |v| family.color(x, x, v)).expect("n >= 3");
    members.truncate(target);
    let mut in_s = vec![false; n];
    for &v in &members {
        in_s[v] = true;
    }
    let p: Vec<usize> = others.into_iter().filter(|&v| !in_s[v]).collect();
    let triple_count = star_triple_count(family, x, &members, &p);
    StarExtraction { x, color, s: members, p, triple_count, centers_tried: 1 }
}

pub fn star_extract(family: &ColoringFamily, opts: &StarOptions) -> Result<StarExtraction> {
    let n = family.n();
    if n < 3 {
        return Err(Error::InvalidHost { host: n, reason: "star extraction needs n >= 3".into() });
    }
    let target = star_size(n, family.k(), opts.max_star).max(1);
    let centers: Vec<usize> = match opts.center {
        CenterChoice::All => (0..n).collect(),
        CenterChoice::Fixed(x) => {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
            vec![x]
        }
        CenterChoice::Budget(budget) => {
            let per = (n + (n - 1 - target) * target) as u64;
            let count = (budget / per.max(1)).clamp(1, n as u64) as usize;
            (0..count).collect()
        }
    };
    let mut best: Option<StarExtraction> = None;
    for &x in &centers {
        let cand = star_at(family, x, target);
        if best.as_ref().is_none_or(|b| cand.triple_count > b.triple_count) {
            best = Some(cand);
        }
    }
    let mut best = best.unwrap();
    best.centers_tried = centers.len();
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingExtraction {
    pub y: Vec<usize>,
    pub m: Vec<Edge>,
    /// Number of `({e, e'}, p)` with `f_p(e) = f_p(e')`, `p` in `Y`.
    pub triple_count: u64,
    /// Which of the tried splits won.
    pub split_index: usize,
}

impl MatchingExtraction {
    pub fn validate(&self, family: &ColoringFamily) -> bool {
        let mut seen = vec![false; family.n()];
        let ok = self.y.iter().chain(self.m.iter().flat_map(|e| [&e.0, &e.1])).all(|&v| {
            let fresh = v < seen.len() && !seen[v];
            if fresh {
                seen[v] = true;
            }
            fresh
        });
        ok && self.m.len() == self.y.len()
            && matching_triple_count(family, &self.y, &self.m) == self.triple_count
    }
}

/// `Y` is the first third of the order, `M` pairs up the rest consecutively.
pub fn matching_layout(order: &[usize], n: usize) -> (Vec<usize>, Vec<Edge>) {
    let y = order[..n].to_vec();
    let m = order[n..3 * n].chunks_exact(2).map(|c| Edge::new(c[0], c[1])).collect();
    (y, m)
}

pub fn matching_triple_count(family: &ColoringFamily, y: &[usize], m: &[Edge]) -> u64 {
    let mut colors = Vec::with_capacity(m.len());
    y.iter()
        .map(|&p| {
            colors.clear();
            colors.extend(m.iter().map(|&e| family.color_of(p, e)));
            pair_collisions(&mut colors)
        })
        .sum()
}

fn check_divisible(host: usize, d: usize, what: &str) -> Result<usize> {
    if host < d || !host.is_multiple_of(d) {
        return Err(Error::InvalidHost { host, reason: format!("{what} needs a positive multiple of {d}") });
    }
    Ok(host / d)
}

pub fn matching_extract(family: &ColoringFamily, split: Split) -> Result<MatchingExtraction> {
    let n = check_divisible(family.n(), 3, "matching extraction")?;
    let mut best: Option<MatchingExtraction> = None;
    for (i, order) in split_orders(family.n(), split).iter().enumerate() {
        let (y, m) = matching_layout(order, n);
        let triple_count = matching_triple_count(family, &y, &m);
        if best.as_ref().is_none_or(|b| triple_count > b.triple_count) {
            best = Some(MatchingExtraction { y, m, triple_count, split_index: i });
        }
    }
    Ok(best.unwrap())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartitionExtraction {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// Number of `(a, {b1, b2})` with `f_a(ab1) = f_a(ab2)`.
    pub triple_count: u64,
    pub split_index: usize,
}

impl BipartitionExtraction {
    pub fn validate(&self, family: &ColoringFamily) -> bool {
        let mut seen = vec![false; family.n()];
        let ok = self.a.iter().chain(&self.b).all(|&v| {
            let fresh = v < seen.len() && !seen[v];
            if fresh {
                seen[v] = true;
            }
            fresh
        });
        ok && seen.iter().all(|&s| s)
            && self.a.len() == self.b.len()
            && bipartition_triple_count(family, &self.a, &self.b) == self.triple_count
    }
}

pub fn bipartition_layout(order: &[usize], n: usize) -> (Vec<usize>, Vec<usize>) {
    (order[..n].to_vec(), order[n..2 * n].to_vec())
}

pub fn bipartition_triple_count(family: &ColoringFamily, a: &[usize], b: &[usize]) -> u64 {
    let mut colors = Vec::with_capacity(b.len());
    a.iter()
        .map(|&x| {
            colors.clear();
            colors.extend(b.iter().map(|&y| family.color(x, x, y)));
            pair_collisions(&mut colors)
        })
        .sum()
}

pub fn bipartition_extract(family: &ColoringFamily, split: Split) -> Result<BipartitionExtraction> {
    let n = check_divisible(family.n(), 2, "bipartition extraction")?;
    let mut best: Option<BipartitionExtraction> = None;
    for (i, order) in split_orders(family.n(), split).iter().enumerate() {
        let (a, b) = bipartition_layout(order, n);
        let triple_count = bipartition_triple_count(family, &a, &b);
        if best.as_ref().is_none_or(|x| triple_count > x.triple_count) {
            best = Some(BipartitionExtraction { a, b, triple_count, split_index: i });
        }
    }
    Ok(best.unwrap())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueExtraction {
    pub x: Vec<usize>,
    pub l: Vec<usize>,
    /// Number of `(b, {e, e'})`, `e, e'` edges inside `L`, with `f_b(e) = f_b(e')`.
    pub pair_count: u64,
    pub split_index: usize,
}

impl CliqueExtraction {
    pub fn validate(&self, family: &ColoringFamily) -> bool {
        let mut seen = vec![false; family.n()];
        let ok = self.x.iter().chain(&self.l).all(|&v| {
            let fresh = v < seen.len() && !seen[v];
            if fresh {
                seen[v] = true;
            }
            fresh
        });
        ok && self.l.len() == 2 * self.x.len() && clique_pair_count(family, &self.x, &self.l) == self.pair_count
    }
}

/// `X` is the first third of the order, `L` the rest.
pub fn clique_layout(order: &[usize], n: usize) -> (Vec<usize>, Vec<usize>) {
    (order[..n].to_vec(), order[n..3 * n].to_vec())
}

pub fn clique_pair_count(family: &ColoringFamily, x: &[usize], l: &[usize]) -> u64 {
    let mut colors = Vec::with_capacity(l.len() * l.len() / 2);
    x.iter()
        .map(|&b| {
            colors.clear();
            for i in 0..l.len() {
                for j in i + 1..l.len() {
                    colors.push(family.color(b, l[i], l[j]));
                }
            }
            pair_collisions(&mut colors)
        })
        .sum()
}

/// Default ceiling on `|X| * |E(L)|` color reads for [`clique_extract`].
pub const DEFAULT_CLIQUE_WORK: u128 = 200_000_000;

pub fn clique_extract(family: &ColoringFamily, split: Split, max_work: u128) -> Result<CliqueExtraction> {
    let n = check_divisible(family.n(), 3, "clique extraction")?;
    let orders = split_orders(family.n(), split);
    let work = orders.len() as u128 * n as u128 * choose2(2 * n as u64) as u128;
    if work > max_work {
        return Err(Error::ScaleGuard { what: "clique pair count".into(), needed: work, limit: max_work });
    }
    let mut best: Option<CliqueExtraction> = None;
    for (i, order) in orders.iter().enumerate() {
        let (x, l) = clique_layout(order, n);
        let pair_count = clique_pair_count(family, &x, &l);
        if best.as_ref().is_none_or(|b| pair_count > b.pair_count) {
            best = Some(CliqueExtraction { x, l, pair_count, split_index: i });
        }
    }
    Ok(best.unwrap())
}

// ---- asserted bounds and their thresholds ----

/// `n^3 / (24 k^3)`, guaranteed for star extraction once `n >= star_n0(k)`.
pub fn star_bound(n: usize, k: u32) -> f64 {
    (n as f64).powi(3) / (24.0 * (k as f64).powi(3))
}

/// `n^3 / (3k)` for a matching extraction on `3n` vertices.
pub fn matching_bound(n: usize, k: u32) -> f64 {
    (n as f64).powi(3) / (3.0 * k as f64)
}

/// `n^3 / (3k)` for a bipartition extraction on `2n` vertices.
pub fn bipartition_bound(n: usize, k: u32) -> f64 {
    matching_bound(n, k)
}

/// `n^5 / (3k)` for a clique extraction on `3n` vertices.
pub fn clique_bound(n: usize, k: u32) -> f64 {
    (n as f64).powi(5) / (3.0 * k as f64)
}

/// Count every star extraction (without `max_star`) is guaranteed to reach:
/// `|P| * min_pairs(|S|, k)`.
pub fn star_guaranteed(n: usize, k: u32) -> u64 {
    let s = star_size(n, k, None);
    (n - 1 - s) as u64 * min_pairs(s as u64, k as u64)
}

/// `n * min_pairs(n, k)`, for both the matching and bipartition extractions.
pub fn matching_guaranteed(n: usize, k: u32) -> u64 {
    n as u64 * min_pairs(n as u64, k as u64)
}

pub fn clique_guaranteed(n: usize, k: u32) -> u128 {
    n as u128 * min_pairs(choose2(2 * n as u64), k as u64) as u128
}

fn threshold(lo: usize, limit: usize, holds: impl Fn(usize) -> bool) -> Option<usize> {
    let mut first_good = None;
    for n in lo..=limit {
        if holds(n) {
            first_good.get_or_insert(n);
        } else {
            first_good = None;
        }
    }
    first_good
}

fn check_limit(k: u32) -> usize {
    512 + 64 * k as usize
}

/// Least `n` from which the floored proof count clears `n^3 / (24k^3)` for
/// every larger `n` up to `512 + 64k` (beyond that the asymptotic margin
/// takes over). `None` for `k = 1`, where `P` is empty.
pub fn star_n0(k: u32) -> Option<usize> {
    threshold(3, check_limit(k), |n| star_guaranteed(n, k) as f64 >= star_bound(n, k))
}

/// Least part size `n` (host `3n`) with `n * min_pairs(n, k) >= n^3/(3k)`
/// from there on.
pub fn matching_n0(k: u32) -> Option<usize> {
    threshold(1, check_limit(k), |n| matching_guaranteed(n, k) as f64 >= matching_bound(n, k))
}

/// Same condition as [`matching_n0`] on host `2n`.
pub fn bipartition_n0(k: u32) -> Option<usize> {
    matching_n0(k)
}

pub fn clique_n0(k: u32) -> Option<usize> {
    threshold(1, check_limit(k), |n| clique_guaranteed(n, k) as f64 >= clique_bound(n, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_star(f: &ColoringFamily, x: usize, s: &[usize], p: &[usize]) -> u64 {
        let mut c = 0;
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                for &q in p {
                    c += (f.color(q, x, s[i]) == f.color(q, x, s[j])) as u64;
                }
            }
        }
        c
    }

    #[test]
    fn monochromatic_star_has_empty_p() {
        let f = ColoringFamily::monochromatic(6, 1).unwrap();
        let st = star_extract(&f, &StarOptions::default()).unwrap();
        assert_eq!(st.s.len(), 5);
        assert!(st.p.is_empty());
        assert_eq!(st.triple_count, 0);
        assert!(st.validate(&f));
    }

    #[test]
    fn star_size_floor() {
        for seed in 0..5 {
            let f = ColoringFamily::uniform(13, 6, seed).unwrap();
            let st = star_extract(&f, &StarOptions::default()).unwrap();
            assert!(st.s.len() >= 2);
            assert!(st.validate(&f));
        }
    }

    #[test]
    fn star_count_matches_triple_loop() {
        let f = ColoringFamily::uniform(40, 2, 7).unwrap();
        let st = star_extract(&f, &StarOptions::default()).unwrap();
        assert_eq!(st.triple_count, naive_star(&f, st.x, &st.s, &st.p));
        let fixed = star_extract(&f, &StarOptions { center: CenterChoice::Fixed(3), max_star: None }).unwrap();
        assert_eq!(fixed.x, 3);
        assert!(fixed.triple_count <= st.triple_count);
    }

    #[test]
    fn star_needs_three_vertices() {
        let f = ColoringFamily::monochromatic(2, 1).unwrap();
        assert!(star_extract(&f, &StarOptions::default()).is_err());
    }

    #[test]
    fn monochromatic_counts() {
        let f = ColoringFamily::monochromatic(9, 1).unwrap();
        assert_eq!(matching_extract(&f, Split::Index).unwrap().triple_count, 9);
        assert_eq!(clique_extract(&f, Split::Index, DEFAULT_CLIQUE_WORK).unwrap().pair_count, 315);
        let g = ColoringFamily::monochromatic(6, 1).unwrap();
        assert_eq!(bipartition_extract(&g, Split::Index).unwrap().triple_count, 9);
    }

    #[test]
    fn injective_families_have_no_collisions() {
        let f = ColoringFamily::injective(9, 36).unwrap();
        assert_eq!(matching_extract(&f, Split::Rotations(3)).unwrap().triple_count, 0);
        assert_eq!(clique_extract(&f, Split::Index, DEFAULT_CLIQUE_WORK).unwrap().pair_count, 0);
        let g = ColoringFamily::injective(6, 15).unwrap();
        assert_eq!(bipartition_extract(&g, Split::Seeded(4)).unwrap().triple_count, 0);
    }

    #[test]
    fn wrong_host_sizes() {
        let f10 = ColoringFamily::monochromatic(10, 1).unwrap();
        assert!(matches!(matching_extract(&f10, Split::Index), Err(Error::InvalidHost { .. })));
        let f7 = ColoringFamily::monochromatic(7, 1).unwrap();
        assert!(bipartition_extract(&f7, Split::Index).is_err());
        let f8 = ColoringFamily::monochromatic(8, 1).unwrap();
        assert!(clique_extract(&f8, Split::Index, DEFAULT_CLIQUE_WORK).is_err());
    }

    #[test]
    fn rotations_keep_the_best_split() {
        let f = ColoringFamily::uniform(30, 3, 1).unwrap();
        let idx = matching_extract(&f, Split::Index).unwrap();
        let rot = matching_extract(&f, Split::Rotations(5)).unwrap();
        assert!(rot.triple_count >= idx.triple_count);
        assert!(rot.validate(&f));
    }

    #[test]
    fn thresholds() {
        assert_eq!(star_n0(1), None);
        for k in 2..8 {
            let n0 = star_n0(k).unwrap();
            assert!(star_guaranteed(n0, k) as f64 >= star_bound(n0, k));
            assert!(matching_n0(k).unwrap() <= 3 * k as usize);
            assert!(clique_n0(k).is_some());
        }
    }
}
