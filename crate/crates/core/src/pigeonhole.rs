//! Counting and selection kernels shared by the extraction primitives and the
//! finders, plus the closed-form worst cases used for provable thresholds.
//!
//! Every selection takes the largest class; ties go to the smallest key or the
//! lexicographically smallest index tuple.

use std::collections::BTreeMap;

/// Number of unordered equal-colored pairs in `colors` (reordered in place).
pub fn pair_collisions(colors: &mut [u32]) -> u64 {
    run_sum(colors, |r| r * r.saturating_sub(1) / 2)
}

/// Number of unordered equal-colored triples in `colors` (reordered in place).
pub fn triple_collisions(colors: &mut [u32]) -> u64 {
    run_sum(colors, |r| if r < 3 { 0 } else { r * (r - 1) * (r - 2) / 6 })
}

fn run_sum(colors: &mut [u32], f: impl Fn(u64) -> u64) -> u64 {
    colors.sort_unstable();
    let mut total = 0;
    let mut i = 0;
    while i < colors.len() {
        let mut j = i + 1;
        while j < colors.len() && colors[j] == colors[i] {
            j += 1;
        }
        total += f((j - i) as u64);
        i = j;
    }
    total
}

/// Largest class of `items` under `key`, members in input order; ties go to the
/// smallest key. `None` for empty input.
pub fn largest_bucket<T: Copy, K: Ord + Copy>(items: &[T], key: impl Fn(T) -> K) -> Option<(K, Vec<T>)> {
    let mut buckets: BTreeMap<K, Vec<T>> = BTreeMap::new();
    for &it in items {
        buckets.entry(key(it)).or_default().push(it);
    }
    let mut best: Option<(K, Vec<T>)> = None;
    for (k, members) in buckets {
        if best.as_ref().is_none_or(|(_, b)| members.len() > b.len()) {
            best = Some((k, members));
        }
    }
    best
}

/// Result of a best-pair or best-triple search over a candidate pool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    /// Pool indices, increasing.
    pub indices: Vec<usize>,
    /// Owners for which all selected items share a color, in input order.
    pub owners: Vec<usize>,
}

/// Finds the pool pair `(i, j)` whose items collide for the most owners, where
/// `color(owner, item)` is the owner's color of pool item `item`.
pub fn best_pair(owners: &[usize], pool: usize, color: impl Fn(usize, usize) -> u32) -> Option<Selection> {
    if pool < 2 {
        return None;
    }
    let mut counts = vec![0u32; pool * pool];
    let mut keyed: Vec<(u32, usize)> = Vec::with_capacity(pool);
    for &o in owners {
        keyed.clear();
        keyed.extend((0..pool).map(|i| (color(o, i), i)));
        keyed.sort_unstable();
        for_runs(&keyed, |run| {
            for a in 0..run.len() {
                let row = run[a].1 * pool;
                for b in &run[a + 1..] {
                    counts[row + b.1] += 1;
                }
            }
        });
    }
    let mut best = (0u32, 0usize, 1usize);
    for i in 0..pool {
        for j in i + 1..pool {
            if counts[i * pool + j] > best.0 {
                best = (counts[i * pool + j], i, j);
            }
        }
    }
    let (_, i, j) = best;
    let owners = owners.iter().copied().filter(|&o| color(o, i) == color(o, j)).collect();
    Some(Selection { indices: vec![i, j], owners })
}

/// Triple analogue of [`best_pair`].
pub fn best_triple(owners: &[usize], pool: usize, color: impl Fn(usize, usize) -> u32) -> Option<Selection> {
    if pool < 3 {
        return None;
    }
    // combinatorial number system: rank(i<j<l) = C(l,3) + C(j,2) + i
    let c2 = |x: usize| x * x.saturating_sub(1) / 2;
    let c3 = |x: usize| if x < 3 { 0 } else { x * (x - 1) * (x - 2) / 6 };
    let mut counts = vec![0u32; c3(pool)];
    let mut keyed: Vec<(u32, usize)> = Vec::with_capacity(pool);
    for &o in owners {
        keyed.clear();
        keyed.extend((0..pool).map(|i| (color(o, i), i)));
        keyed.sort_unstable();
        for_runs(&keyed, |run| {
            for c in 2..run.len() {
                let base_l = c3(run[c].1);
                for b in 1..c {
                    let base = base_l + c2(run[b].1);
                    for a in &run[..b] {
                        counts[base + a.1] += 1;
                    }
                }
            }
        });
    }
    let mut best = (0u32, [0usize, 1, 2]);
    for i in 0..pool {
        for j in i + 1..pool {
            for l in j + 1..pool {
                let v = counts[c3(l) + c2(j) + i];
                if v > best.0 {
                    best = (v, [i, j, l]);
                }
            }
        }
    }
    let [i, j, l] = best.1;
    let owners = owners
        .iter()
        .copied()
        .filter(|&o| {
            let c = color(o, i);
            c == color(o, j) && c == color(o, l)
        })
        .collect();
    Some(Selection { indices: vec![i, j, l], owners })
}

fn for_runs(keyed: &[(u32, usize)], mut f: impl FnMut(&[(u32, usize)])) {
    let mut i = 0;
    while i < keyed.len() {
        let mut j = i + 1;
        while j < keyed.len() && keyed[j].0 == keyed[i].0 {
            j += 1;
        }
        if j - i >= 2 {
            f(&keyed[i..j]);
        }
        i = j;
    }
}

/// Disjoint equal-key groups of a fixed size over a prefix of a ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Peeling {
    /// Items considered: the largest multiple of the group size not above the
    /// input length.
    pub ground: usize,
    /// Groups of ground indices, by key then by position.
    pub groups: Vec<Vec<usize>>,
    /// `member[i]` is the group containing ground index `i`.
    pub member: Vec<Option<usize>>,
}

impl Peeling {
    pub fn covered(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn coverage(&self) -> f64 {
        if self.ground == 0 {
            0.0
        } else {
            self.covered() as f64 / self.ground as f64
        }
    }

    pub fn meets(&self, coverage: f64) -> bool {
        self.ground > 0 && self.covered() as f64 >= coverage * self.ground as f64
    }
}

/// Repeatedly takes `m` not-yet-used items of one key until no key has `m`
/// left; equivalently, all full chunks of every key class.
pub fn peel<K: Ord + Copy>(keys: &[K], m: usize) -> Peeling {
    assert!(m >= 1);
    let ground = keys.len() / m * m;
    let mut buckets: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for (i, &k) in keys[..ground].iter().enumerate() {
        buckets.entry(k).or_default().push(i);
    }
    let mut groups = Vec::new();
    let mut member = vec![None; ground];
    for (_, idx) in buckets {
        for chunk in idx.chunks_exact(m) {
            for &i in chunk {
                member[i] = Some(groups.len());
            }
            groups.push(chunk.to_vec());
        }
    }
    Peeling { ground, groups, member }
}

/// Smallest index lying in a group of every peeling.
pub fn common_member(peelings: &[&Peeling]) -> Option<usize> {
    let ground = peelings.iter().map(|p| p.ground).min()?;
    (0..ground).find(|&i| peelings.iter().all(|p| p.member[i].is_some()))
}

// ---- closed-form worst cases ----

pub fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

pub fn choose3(x: u64) -> u64 {
    if x < 3 {
        0
    } else {
        x * (x - 1) * (x - 2) / 6
    }
}

/// Minimum of `sum C(b_i, 2)` over splits of `q` items into `k` classes.
pub fn min_pairs(q: u64, k: u64) -> u64 {
    let (a, r) = (q / k, q % k);
    r * choose2(a + 1) + (k - r) * choose2(a)
}

/// Minimum of `sum C(b_i, 3)` over splits of `q` items into `k` classes.
pub fn min_triples(q: u64, k: u64) -> u64 {
    let (a, r) = (q / k, q % k);
    r * choose3(a + 1) + (k - r) * choose3(a)
}

/// Guaranteed owner count of the best pair when each of `owners` owners sees
/// at least `min_pairs(q, k)` colliding pairs among `q` items.
pub fn best_pair_lb(owners: u64, q: u64, k: u64) -> u64 {
    let total = owners as u128 * min_pairs(q, k) as u128;
    total.div_ceil(choose2(q).max(1) as u128) as u64
}

pub fn best_triple_lb(owners: u64, q: u64, k: u64) -> u64 {
    let total = owners as u128 * min_triples(q, k) as u128;
    total.div_ceil(choose3(q).max(1) as u128) as u64
}

/// Guaranteed size of the largest class among `size` items and `classes` keys.
pub fn bucket_lb(size: u64, classes: u64) -> u64 {
    size.div_ceil(classes.max(1))
}

/// Worst-case number of covered items when peeling `ground` items (already a
/// multiple of `m`) with `classes` keys. Each class leaves fewer than `m`
/// items, and the leftovers sum to a multiple of `m`.
pub fn peel_covered_lb(ground: u64, classes: u64, m: u64) -> u64 {
    let leftover = (classes * (m - 1)).min(ground) / m * m;
    ground - leftover
}

/// Whether peeling `len` items into `m`-groups over `classes` keys provably
/// reaches `coverage` of the truncated ground.
pub fn peel_ok(len: u64, classes: u64, m: u64, coverage: f64) -> bool {
    let ground = len / m * m;
    ground > 0 && peel_covered_lb(ground, classes, m) as f64 >= coverage * ground as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_pairs(colors: &[u32]) -> u64 {
        let mut c = 0;
        for i in 0..colors.len() {
            for j in i + 1..colors.len() {
                c += (colors[i] == colors[j]) as u64;
            }
        }
        c
    }

    #[test]
    fn bucketing_identity() {
        let mut rng = crate::rng::SplitMix64::new(3);
        for _ in 0..200 {
            let len = rng.below(40) as usize;
            let k = 1 + rng.below(6) as u32;
            let colors: Vec<u32> = (0..len).map(|_| 1 + rng.below(k as u64) as u32).collect();
            let mut sorted = colors.clone();
            assert_eq!(pair_collisions(&mut sorted), naive_pairs(&colors));
            let mut t = 0;
            for i in 0..len {
                for j in i + 1..len {
                    for l in j + 1..len {
                        t += (colors[i] == colors[j] && colors[j] == colors[l]) as u64;
                    }
                }
            }
            let mut sorted = colors.clone();
            assert_eq!(triple_collisions(&mut sorted), t);
        }
    }

    #[test]
    fn largest_bucket_breaks_ties_by_key() {
        let items = [5usize, 1, 2, 7, 4, 3];
        let (k, m) = largest_bucket(&items, |x| x % 2).unwrap();
        assert_eq!(k, 1);
        assert_eq!(m, vec![5, 1, 7, 3]);
        let (k, m) = largest_bucket(&[2usize, 1], |x| x).unwrap();
        assert_eq!((k, m), (1, vec![1]));
        assert!(largest_bucket(&[] as &[usize], |x| x).is_none());
    }

    fn brute_best(owners: &[usize], pool: usize, t: usize, color: &dyn Fn(usize, usize) -> u32) -> (usize, Vec<usize>) {
        let mut best = (0, vec![]);
        let mut idx: Vec<usize> = (0..t).collect();
        loop {
            let cnt = owners.iter().filter(|&&o| idx.iter().all(|&i| color(o, i) == color(o, idx[0]))).count();
            if best.1.is_empty() || cnt > best.0 {
                best = (cnt, idx.clone());
            }
            // next combination
            let mut p = t;
            loop {
                if p == 0 {
                    return best;
                }
                p -= 1;
                if idx[p] < pool - t + p {
                    idx[p] += 1;
                    for q in p + 1..t {
                        idx[q] = idx[q - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn best_pair_and_triple_match_brute_force() {
        for seed in 0..30u64 {
            let table: Vec<u32> = (0..20 * 9).map(|i| crate::rng::to_color(crate::rng::splitmix_at(seed, i), 3)).collect();
            let color = |o: usize, i: usize| table[o * 9 + i];
            let owners: Vec<usize> = (0..20).collect();
            let p = best_pair(&owners, 9, color).unwrap();
            let (cnt, idx) = brute_best(&owners, 9, 2, &color);
            assert_eq!(p.indices, idx);
            assert_eq!(p.owners.len(), cnt);
            let t = best_triple(&owners, 9, color).unwrap();
            let (cnt, idx) = brute_best(&owners, 9, 3, &color);
            assert_eq!(t.indices, idx);
            assert_eq!(t.owners.len(), cnt);
        }
    }

    #[test]
    fn peeling_takes_full_chunks() {
        let keys = [1, 2, 1, 1, 2, 1, 2, 3];
        let p = peel(&keys, 3);
        assert_eq!(p.ground, 6);
        assert_eq!(p.groups, vec![vec![0, 2, 3]]);
        assert_eq!(p.covered(), 3);
        assert!(p.meets(0.5) && !p.meets(0.6));
        let q = peel(&[7, 7, 7, 7, 7, 7], 3);
        assert_eq!(q.groups.len(), 2);
        assert_eq!(common_member(&[&p, &q]), Some(0));
    }

    #[test]
    fn worst_cases_are_minima() {
        assert_eq!(min_pairs(256, 3), 3655 + 2 * 3570);
        assert_eq!(min_pairs(5, 1), 10);
        assert_eq!(min_triples(6, 2), 2);
        assert_eq!(bucket_lb(10, 3), 4);
        assert!(peel_ok(600, 3, 3, 0.99));
        assert!(!peel_ok(597, 3, 3, 0.99));
        assert!(peel_ok(3, 1, 3, 0.99));
    }

    proptest::proptest! {
        #[test]
        fn best_pair_meets_its_bound(seed in 0u64..1000, k in 1u32..5, pool in 2usize..12, owners in 1usize..30) {
            let color = |o: usize, i: usize| crate::rng::to_color(crate::rng::splitmix_at(seed, (o * 64 + i) as u64), k);
            let own: Vec<usize> = (0..owners).collect();
            let sel = best_pair(&own, pool, color).unwrap();
            proptest::prop_assert!(sel.owners.len() as u64 >= best_pair_lb(owners as u64, pool as u64, k as u64));
        }

        #[test]
        fn peel_meets_worst_case(keys in proptest::collection::vec(0u8..5, 0..200), m in 1usize..6) {
            let p = peel(&keys, m);
            proptest::prop_assert!(p.covered() as u64 >= peel_covered_lb(p.ground as u64, 5, m as u64));
            for g in &p.groups {
                proptest::prop_assert_eq!(g.len(), m);
                proptest::prop_assert!(g.iter().all(|&i| keys[i] == keys[g[0]]));
            }
        }
    }
}
