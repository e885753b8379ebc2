use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Edge, PatternGraph};

/// Patterns with more vertices than this are not enumerated copy by copy.
pub const MAX_ENUM_VERTICES: usize = 10;

/// Injective placement of a pattern's vertices into the host; `map[p]` is the
/// host vertex playing pattern vertex `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Embedding {
    map: Vec<usize>,
}

impl Embedding {
    pub fn new(pattern: &PatternGraph, map: Vec<usize>, n: usize) -> Result<Self> {
        if map.len() != pattern.num_vertices() {
            return Err(Error::SizeMismatch(format!(
                "embedding has {} images for {} pattern vertices",
                map.len(),
                pattern.num_vertices()
            )));
        }
        let mut seen = HashSet::with_capacity(map.len());
        for &x in &map {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
            if !seen.insert(x) {
                return Err(Error::InvalidCertificate(format!("host vertex {x} used twice")));
            }
        }
        Ok(Embedding { map })
    }

    /// No validation; callers guarantee injectivity.
    pub(crate) fn from_map_unchecked(map: Vec<usize>) -> Self {
        Embedding { map }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, p: usize) -> usize {
        self.map[p]
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// The copy `T`: images of the pattern edges, in pattern edge order.
    pub fn copy_edges(&self, pattern: &PatternGraph) -> Vec<Edge> {
        pattern.edges().iter().map(|&(a, b)| Edge::new(self.map[a], self.map[b])).collect()
    }

    pub fn is_valid_for(&self, pattern: &PatternGraph, n: usize) -> bool {
        Embedding::new(pattern, self.map.clone(), n).is_ok()
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// One labeling per distinct copy of `pattern` on the slots `0..v`: `labeling[p]`
/// is the slot of pattern vertex `p`. Labelings come in lexicographic order and
/// each is the smallest one producing its edge image.
pub fn local_labelings(pattern: &PatternGraph) -> Result<Vec<Vec<usize>>> {
    let v = pattern.num_vertices();
    if v > MAX_ENUM_VERTICES {
        return Err(Error::ScaleGuard {
            what: format!("copy enumeration of {}", pattern.label()),
            needed: v as u128,
            limit: MAX_ENUM_VERTICES as u128,
        });
    }
    let slot_pair = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        a * v + b
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..v).collect();
    loop {
        let mut image = 0u128;
        for &(a, b) in pattern.edges() {
            image |= 1u128 << slot_pair(perm[a], perm[b]);
        }
        if seen.insert(image) {
            out.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of copies of `pattern` in `K_n`: `C(n, v) * v! / |Aut(H)|`.
pub fn copy_count(pattern: &PatternGraph, n: usize) -> Result<u128> {
    let v = pattern.num_vertices();
    if v > n {
        return Err(Error::PatternLargerThanHost { pattern: v, host: n });
    }
    Ok(binomial(n as u128, v as u128) * local_labelings(pattern)?.len() as u128)
}

pub fn automorphism_count(pattern: &PatternGraph) -> Result<u128> {
    let v = pattern.num_vertices() as u128;
    let fact: u128 = (1..=v).product();
    Ok(fact / local_labelings(pattern)?.len() as u128)
}

/// Streams every copy of a pattern in `K_n` exactly once: vertex subsets in
/// lexicographic order, then the local labelings of each subset.
pub struct CopyEnumerator {
    n: usize,
    local: Vec<Vec<usize>>,
    subset: Vec<usize>,
    next_local: usize,
    done: bool,
}

impl CopyEnumerator {
    pub fn new(pattern: &PatternGraph, n: usize) -> Result<Self> {
        let v = pattern.num_vertices();
        if v > n {
            return Err(Error::PatternLargerThanHost { pattern: v, host: n });
        }
        Ok(CopyEnumerator {
            n,
            local: local_labelings(pattern)?,
            subset: (0..v).collect(),
            next_local: 0,
            done: false,
        })
    }

    fn advance_subset(&mut self) -> bool {
        let v = self.subset.len();
        let mut i = v;
        while i > 0 {
            i -= 1;
            if self.subset[i] < self.n - v + i {
                self.subset[i] += 1;
                for j in i + 1..v {
                    self.subset[j] = self.subset[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for CopyEnumerator {
    type Item = Embedding;

    fn next(&mut self) -> Option<Embedding> {
        if self.done {
            return None;
        }
        if self.next_local == self.local.len() {
            if !self.advance_subset() {
                self.done = true;
                return None;
            }
            self.next_local = 0;
        }
        let labeling = &self.local[self.next_local];
        self.next_local += 1;
        Some(Embedding::from_map_unchecked(labeling.iter().map(|&s| self.subset[s]).collect()))
    }
}

pub fn enumerate_copies(pattern: &PatternGraph, n: usize) -> Result<CopyEnumerator> {
    CopyEnumerator::new(pattern, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> PatternGraph {
        PatternGraph::named(name).unwrap()
    }

    #[test]
    fn small_copy_counts() {
        assert_eq!(enumerate_copies(&g("K2"), 4).unwrap().count(), 6);
        assert_eq!(enumerate_copies(&g("C4"), 4).unwrap().count(), 3);
        assert_eq!(enumerate_copies(&g("P2"), 4).unwrap().count(), 12);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphism_count(&g("C4")).unwrap(), 8);
        assert_eq!(automorphism_count(&g("S4")).unwrap(), 24);
        assert_eq!(automorphism_count(&g("I4")).unwrap(), 384);
        assert_eq!(automorphism_count(&g("K3,3")).unwrap(), 72);
        assert_eq!(automorphism_count(&g("P2").with_isolated(2).unwrap()).unwrap(), 4);
    }

    #[test]
    fn pattern_too_large_for_host() {
        assert!(matches!(
            enumerate_copies(&g("P4"), 4),
            Err(Error::PatternLargerThanHost { pattern: 5, host: 4 })
        ));
    }

    #[test]
    fn embeddings_reject_bad_maps() {
        let p2 = g("P2");
        assert!(Embedding::new(&p2, vec![0, 1, 1], 4).is_err());
        assert!(Embedding::new(&p2, vec![0, 1, 4], 4).is_err());
        assert!(Embedding::new(&p2, vec![0, 1], 4).is_err());
        assert!(Embedding::new(&p2, vec![3, 1, 0], 4).is_ok());
    }
}
