use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{splitmix_at, to_color};

/// An edge of the host `K_n`, always stored as `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b, "host edges join distinct vertices");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    pub fn shares_vertex(&self, other: &Edge) -> bool {
        self.touches(other.0) || self.touches(other.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Number of edges of `K_n`.
pub fn host_edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Where the colors come from. Only `Dense` is stored cell by cell; the other
/// sources are evaluated on demand so hosts with `10^4` vertices stay cheap.
#[derive(Debug, Clone)]
pub enum ColorSource {
    /// Owner-major table: `colors[owner * m + edge_index]`.
    Dense(Vec<u32>),
    /// Cell `i = owner * m + edge_index` takes the `i`-th SplitMix64 draw.
    Uniform { seed: u64 },
    /// Every cell has the same color.
    Constant(u32),
    /// Edge `e` gets color `edge_index(e) + 1` under every owner.
    Injective,
    /// Per-owner shifted copy of the proper coloring `(a + b) mod n'`
    /// (`n'` the least odd number `>= n`), reduced mod `k`.
    ProperIsh { seed: u64 },
}

/// `n` colorings of `E(K_n)` with colors in `1..=k`, one per owner vertex.
#[derive(Debug, Clone)]
pub struct ColoringFamily {
    n: usize,
    k: u32,
    source: ColorSource,
}

impl ColoringFamily {
    pub fn from_dense(n: usize, k: u32, colors: Vec<u32>) -> Result<Self> {
        let m = host_edge_count(n);
        if colors.len() != n * m {
            return Err(Error::SizeMismatch(format!(
                "expected {} colors for n={n}, got {}",
                n * m,
                colors.len()
            )));
        }
        if let Some(&bad) = colors.iter().find(|&&c| c == 0 || c > k) {
            return Err(Error::ColorOutOfRange { color: bad as u64, k });
        }
        Ok(ColoringFamily { n, k, source: ColorSource::Dense(colors) })
    }

    pub fn uniform(n: usize, k: u32, seed: u64) -> Result<Self> {
        Self::check_k(k)?;
        Ok(ColoringFamily { n, k, source: ColorSource::Uniform { seed } })
    }

    pub fn monochromatic(n: usize, k: u32) -> Result<Self> {
        Self::check_k(k)?;
        Ok(ColoringFamily { n, k, source: ColorSource::Constant(1) })
    }

    pub fn injective(n: usize, k: u32) -> Result<Self> {
        let m = host_edge_count(n);
        if (k as usize) < m {
            return Err(Error::InvalidParameter(format!(
                "injective family on K_{n} needs k >= {m}, got {k}"
            )));
        }
        Ok(ColoringFamily { n, k, source: ColorSource::Injective })
    }

    pub fn proper_ish(n: usize, k: u32, seed: u64) -> Result<Self> {
        Self::check_k(k)?;
        Ok(ColoringFamily { n, k, source: ColorSource::ProperIsh { seed } })
    }

    fn check_k(k: u32) -> Result<()> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn source(&self) -> &ColorSource {
        &self.source
    }

    pub fn num_edges(&self) -> usize {
        host_edge_count(self.n)
    }

    /// Lexicographic rank of `{a, b}` among all host edges.
    #[inline]
    pub fn edge_index(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    /// Inverse of [`edge_index`](Self::edge_index).
    pub fn edge_at(&self, mut index: usize) -> Edge {
        let mut a = 0;
        loop {
            let row = self.n - a - 1;
            if index < row {
                return Edge(a, a + 1 + index);
            }
            index -= row;
            a += 1;
        }
    }

    #[inline]
    pub fn color(&self, owner: usize, a: usize, b: usize) -> u32 {
        debug_assert!(owner < self.n && a < self.n && b < self.n && a != b);
        match &self.source {
            ColorSource::Dense(colors) => colors[owner * self.num_edges() + self.edge_index(a, b)],
            ColorSource::Uniform { seed } => {
                let cell = owner as u64 * self.num_edges() as u64 + self.edge_index(a, b) as u64;
                to_color(splitmix_at(*seed, cell), self.k)
            }
            ColorSource::Constant(c) => *c,
            ColorSource::Injective => self.edge_index(a, b) as u32 + 1,
            ColorSource::ProperIsh { seed } => {
                let modulus = if self.n % 2 == 1 { self.n } else { self.n + 1 };
                let class = ((a + b) % modulus) as u64;
                let shift = splitmix_at(*seed, owner as u64);
                ((class.wrapping_add(shift)) % self.k as u64) as u32 + 1
            }
        }
    }

    #[inline]
    pub fn color_of(&self, owner: usize, e: Edge) -> u32 {
        self.color(owner, e.0, e.1)
    }

    /// Stored table, materialising lazy sources.
    pub fn to_dense(&self) -> Vec<u32> {
        if let ColorSource::Dense(c) = &self.source {
            return c.clone();
        }
        let m = self.num_edges();
        let mut out = Vec::with_capacity(self.n * m);
        for owner in 0..self.n {
            for a in 0..self.n {
                for b in a + 1..self.n {
                    out.push(self.color(owner, a, b));
                }
            }
        }
        out
    }

    pub fn materialize(&self) -> ColoringFamily {
        ColoringFamily { n: self.n, k: self.k, source: ColorSource::Dense(self.to_dense()) }
    }

    /// Overwrites one cell, materialising the family first if needed.
    pub fn set_color(&mut self, owner: usize, e: Edge, color: u32) -> Result<()> {
        if color == 0 || color > self.k {
            return Err(Error::ColorOutOfRange { color: color as u64, k: self.k });
        }
        if owner >= self.n || e.1 >= self.n {
            return Err(Error::VertexOutOfRange { vertex: owner.max(e.1), n: self.n });
        }
        if !matches!(self.source, ColorSource::Dense(_)) {
            *self = self.materialize();
        }
        let idx = owner * self.num_edges() + self.edge_index(e.0, e.1);
        if let ColorSource::Dense(colors) = &mut self.source {
            colors[idx] = color;
        }
        Ok(())
    }

    /// Same colors, declared range widened to `k` (must not shrink).
    pub fn with_k(&self, k: u32) -> Result<Self> {
        if k < self.k && !self.to_dense().iter().all(|&c| c <= k) {
            return Err(Error::InvalidParameter(format!("cannot shrink k from {} to {k}", self.k)));
        }
        let mut f = self.materialize();
        f.k = k;
        Ok(f)
    }
}

impl PartialEq for ColoringFamily {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.to_dense() == other.to_dense()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_index_is_lexicographic_bijection() {
        let f = ColoringFamily::monochromatic(7, 1).unwrap();
        let mut expected = 0;
        for a in 0..7 {
            for b in a + 1..7 {
                assert_eq!(f.edge_index(a, b), expected);
                assert_eq!(f.edge_index(b, a), expected);
                assert_eq!(f.edge_at(expected), Edge(a, b));
                expected += 1;
            }
        }
        assert_eq!(expected, f.num_edges());
    }

    #[test]
    fn uniform_family_is_deterministic_and_in_range() {
        let f = ColoringFamily::uniform(10, 2, 42).unwrap();
        let g = ColoringFamily::uniform(10, 2, 42).unwrap();
        assert_eq!(f.to_dense(), g.to_dense());
        assert!(f.to_dense().iter().all(|&c| c == 1 || c == 2));
        let h = ColoringFamily::uniform(10, 2, 43).unwrap();
        assert_ne!(f.to_dense(), h.to_dense());
    }

    #[test]
    fn uniform_matches_sequential_stream() {
        let f = ColoringFamily::uniform(6, 5, 99).unwrap();
        let mut rng = crate::rng::SplitMix64::new(99);
        for c in f.to_dense() {
            assert_eq!(c, to_color(rng.next_u64(), 5));
        }
    }

    #[test]
    fn injective_needs_enough_colors() {
        assert!(ColoringFamily::injective(4, 5).is_err());
        let f = ColoringFamily::injective(4, 6).unwrap();
        let mut colors: Vec<u32> = (0..6).map(|i| f.color_of(2, f.edge_at(i))).collect();
        colors.dedup();
        assert_eq!(colors.len(), 6);
    }

    #[test]
    fn proper_ish_is_proper_when_k_is_large() {
        let n = 8;
        let f = ColoringFamily::proper_ish(n, 9, 5).unwrap();
        for owner in 0..n {
            for v in 0..n {
                let mut seen = std::collections::HashSet::new();
                for u in (0..n).filter(|&u| u != v) {
                    assert!(seen.insert(f.color(owner, v, u)));
                }
            }
        }
    }

    #[test]
    fn dense_validation() {
        assert!(matches!(
            ColoringFamily::from_dense(3, 2, vec![1, 2, 0, 1, 1, 1, 1, 1, 1]),
            Err(Error::ColorOutOfRange { color: 0, .. })
        ));
        assert!(matches!(
            ColoringFamily::from_dense(3, 2, vec![1; 8]),
            Err(Error::SizeMismatch(_))
        ));
    }

    #[test]
    fn set_color_materialises() {
        let mut f = ColoringFamily::monochromatic(4, 3).unwrap();
        f.set_color(1, Edge::new(3, 0), 3).unwrap();
        assert_eq!(f.color(1, 0, 3), 3);
        assert_eq!(f.color(0, 0, 3), 1);
        assert!(f.set_color(1, Edge(0, 1), 4).is_err());
    }
}
