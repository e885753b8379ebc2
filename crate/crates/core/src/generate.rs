//! Family generators, plus a resampling builder for good families.
//!
//! The builder is a heuristic in the style of algorithmic local-lemma
//! resampling: the returned family is only trusted because the verifier
//! accepts it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{copy_count, enumerate_copies, host_edge_count, ColoringFamily, PatternGraph};
use crate::rng::{to_color, SplitMix64, GAMMA};
use crate::verify::{family_is_good, DEFAULT_MAX_COPIES};

pub const DEFAULT_RESAMPLE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    UniformRandom,
    Monochromatic,
    Injective,
    ProperIsh,
    ResampledGood,
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::InvalidParameter(format!("unknown generator kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub k: u32,
    #[serde(default)]
    pub seed: u64,
    /// Required for `resampled-good`.
    #[serde(default)]
    pub pattern: Option<PatternGraph>,
    /// Resample budget for `resampled-good`.
    #[serde(default)]
    pub budget: Option<u64>,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, k: u32, seed: u64) -> Self {
        GeneratorSpec { kind, n, k, seed, pattern: None, budget: None }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<ColoringFamily> {
    match spec.kind {
        GeneratorKind::UniformRandom => ColoringFamily::uniform(spec.n, spec.k, spec.seed),
        GeneratorKind::Monochromatic => ColoringFamily::monochromatic(spec.n, spec.k),
        GeneratorKind::Injective => ColoringFamily::injective(spec.n, spec.k),
        GeneratorKind::ProperIsh => ColoringFamily::proper_ish(spec.n, spec.k, spec.seed),
        GeneratorKind::ResampledGood => {
            let pattern = spec
                .pattern
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("resampled-good needs a pattern".into()))?;
            construct_good_family_with(
                spec.n,
                pattern,
                spec.k,
                spec.seed,
                spec.budget.unwrap_or(DEFAULT_RESAMPLE_BUDGET),
            )
        }
    }
}

pub fn construct_good_family(n: usize, pattern: &PatternGraph, k: u32) -> Result<ColoringFamily> {
    construct_good_family_with(n, pattern, k, 0, DEFAULT_RESAMPLE_BUDGET)
}

/// Starts from the uniform family of `seed` and, while some copy is bad,
/// redraws every color its vertices give its edges (first bad copy in
/// enumeration order). Redraws continue the same stream past the initial
/// `n * C(n,2)` draws.
pub fn construct_good_family_with(
    n: usize,
    pattern: &PatternGraph,
    k: u32,
    seed: u64,
    budget: u64,
) -> Result<ColoringFamily> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if pattern.num_vertices() > n {
        return Err(Error::PatternLargerThanHost { pattern: pattern.num_vertices(), host: n });
    }
    let total = copy_count(pattern, n)?;
    if total > DEFAULT_MAX_COPIES {
        return Err(Error::ScaleGuard {
            what: format!("copies of {} on K_{n}", pattern.label()),
            needed: total,
            limit: DEFAULT_MAX_COPIES,
        });
    }
    let m = host_edge_count(n);
    let mut colors = ColoringFamily::uniform(n, k, seed)?.to_dense();
    let mut rng = SplitMix64::new(seed.wrapping_add((colors.len() as u64).wrapping_mul(GAMMA)));
    let copies: Vec<(Vec<usize>, Vec<usize>)> = enumerate_copies(pattern, n)?
        .map(|emb| {
            let index = |a: usize, b: usize| {
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                a * (2 * n - a - 1) / 2 + (b - a - 1)
            };
            let edges = pattern.edges().iter().map(|&(a, b)| index(emb.image(a), emb.image(b))).collect();
            (emb.map().to_vec(), edges)
        })
        .collect();
    let good = |colors: &[u32], (verts, edges): &(Vec<usize>, Vec<usize>)| {
        verts.iter().any(|&v| {
            let row = &colors[v * m..(v + 1) * m];
            (0..edges.len()).all(|i| (i + 1..edges.len()).all(|j| row[edges[i]] != row[edges[j]]))
        })
    };

    let mut resamples = 0;
    while let Some(bad) = copies.iter().find(|c| !good(&colors, c)) {
        if resamples == budget {
            let bad_copies = copies.iter().filter(|c| !good(&colors, c)).count() as u64;
            return Err(Error::BudgetExhausted { budget, bad_copies });
        }
        resamples += 1;
        for &v in &bad.0 {
            for &e in &bad.1 {
                colors[v * m + e] = to_color(rng.next_u64(), k);
            }
        }
    }
    let family = ColoringFamily::from_dense(n, k, colors)?;
    if !family_is_good(&family, pattern)?.is_good {
        return Err(Error::Internal("resampled family failed verification".into()));
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PatternGraph;

    fn g(name: &str) -> PatternGraph {
        PatternGraph::named(name).unwrap()
    }

    #[test]
    fn simple_kinds() {
        let f = generate(&GeneratorSpec::new(GeneratorKind::Monochromatic, 5, 3, 0)).unwrap();
        assert!(f.to_dense().iter().all(|&c| c == 1));
        let f = generate(&GeneratorSpec::new(GeneratorKind::Injective, 4, 6, 0)).unwrap();
        let d = f.to_dense();
        for v in 0..4 {
            let mut row = d[v * 6..(v + 1) * 6].to_vec();
            row.sort();
            row.dedup();
            assert_eq!(row.len(), 6);
        }
        assert!(generate(&GeneratorSpec::new(GeneratorKind::Injective, 4, 5, 0)).is_err());
        let spec = GeneratorSpec::new(GeneratorKind::UniformRandom, 10, 2, 42);
        assert_eq!(generate(&spec).unwrap().to_dense(), generate(&spec).unwrap().to_dense());
        let spec = GeneratorSpec::new(GeneratorKind::ProperIsh, 10, 4, 7);
        assert_eq!(generate(&spec).unwrap().to_dense(), generate(&spec).unwrap().to_dense());
    }

    #[test]
    fn kind_names() {
        assert_eq!("resampled-good".parse::<GeneratorKind>().unwrap(), GeneratorKind::ResampledGood);
        assert_eq!("uniform-random".parse::<GeneratorKind>().unwrap(), GeneratorKind::UniformRandom);
        assert!("uniform".parse::<GeneratorKind>().is_err());
    }

    #[test]
    fn single_edge_is_immediate() {
        for n in 2..8 {
            let f = construct_good_family_with(n, &g("K2"), 1, 3, 0).unwrap();
            assert!(family_is_good(&f, &g("K2")).unwrap().is_good);
        }
    }

    #[test]
    fn two_disjoint_edges_on_six_vertices() {
        let f = construct_good_family(6, &g("I2"), 5).unwrap();
        assert!(family_is_good(&f, &g("I2")).unwrap().is_good);
    }

    #[test]
    fn impossible_target_exhausts_budget() {
        match construct_good_family_with(6, &g("P2"), 1, 0, 1000) {
            Err(Error::BudgetExhausted { budget: 1000, bad_copies }) => assert!(bad_copies > 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn seeded_and_verified() {
        let spec = GeneratorSpec {
            pattern: Some(g("P2")),
            budget: Some(100_000),
            ..GeneratorSpec::new(GeneratorKind::ResampledGood, 5, 3, 11)
        };
        let a = generate(&spec).unwrap();
        assert!(family_is_good(&a, &g("P2")).unwrap().is_good);
        assert_eq!(a.to_dense(), generate(&spec).unwrap().to_dense());
        let missing = GeneratorSpec::new(GeneratorKind::ResampledGood, 5, 3, 11);
        assert!(matches!(generate(&missing), Err(Error::InvalidParameter(_))));
    }
}
