//! Exact values of `C(n, H)` at desk scale: a backtracking decision procedure
//! with per-owner color symmetry breaking, a raw exhaustive loop for the
//! tiniest cases, and a DIMACS export for external solvers.

mod cnf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{copy_count, enumerate_copies, host_edge_count, ColoringFamily, PatternGraph};
use crate::verify::family_is_good;

pub use cnf::{cnf_counts, decode_model, export_cnf, write_cnf, CnfCounts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactOptions {
    /// Color assignments tried before giving up on one decision.
    pub node_budget: u64,
    /// Largest number of copies the search will index.
    pub max_copies: u128,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { node_budget: 50_000_000, max_copies: 1_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    Backtracking,
    ExternalCnf,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    /// A good family, already re-checked by [`family_is_good`].
    Good(ColoringFamily),
    /// Complete search found none.
    NoGood,
    /// A guard stopped the search.
    Undecided { reason: String },
}

impl Decision {
    pub fn is_good(&self) -> Option<bool> {
        match self {
            Decision::Good(_) => Some(true),
            Decision::NoGood => Some(false),
            Decision::Undecided { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactValue {
    Exact(u32),
    /// `lower <= C(n, H)`, and `C(n, H) <= upper` when known.
    Bracket { lower: u32, upper: Option<u32> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult {
    pub n: usize,
    pub pattern: PatternGraph,
    pub value: ExactValue,
    /// A good family with `upper` colors, when one was found.
    pub witness_family: Option<ColoringFamily>,
    pub method: Method,
}

struct CopyData {
    verts: Vec<usize>,
    edges: Vec<usize>,
}

struct Search {
    k: u32,
    m: usize,
    slots: usize,
    copies: Vec<CopyData>,
    order: Vec<(usize, usize)>,
    /// `touch[p]`: the `(copy, slot)` pairs whose owner and edge match cell `p`.
    touch: Vec<Vec<(usize, usize)>>,
    color: Vec<u32>,
    dead: Vec<bool>,
    alive: Vec<usize>,
    max_color: Vec<u32>,
    trail: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn new(n: usize, pattern: &PatternGraph, k: u32, budget: u64) -> Result<Search> {
        let m = host_edge_count(n);
        let index = |a: usize, b: usize| {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            a * (2 * n - a - 1) / 2 + (b - a - 1)
        };
        let copies: Vec<CopyData> = enumerate_copies(pattern, n)?
            .map(|emb| CopyData {
                verts: emb.map().to_vec(),
                edges: pattern.edges().iter().map(|&(a, b)| index(emb.image(a), emb.image(b))).collect(),
            })
            .collect();
        let slots = pattern.num_vertices();
        // cells in colex edge order (by larger endpoint), owners ascending
        let mut edges: Vec<(usize, usize)> = (0..n).flat_map(|b| (0..b).map(move |a| (a, b))).collect();
        edges.sort_by_key(|&(a, b)| (b, a));
        let mut touch_of = vec![Vec::new(); n * m];
        for (t, c) in copies.iter().enumerate() {
            for (slot, &v) in c.verts.iter().enumerate() {
                for &e in &c.edges {
                    touch_of[v * m + e].push((t, slot));
                }
            }
        }
        let mut order = Vec::new();
        let mut touch = Vec::new();
        for &(a, b) in &edges {
            let e = index(a, b);
            for v in 0..n {
                let list = std::mem::take(&mut touch_of[v * m + e]);
                if !list.is_empty() {
                    order.push((v, e));
                    touch.push(list);
                }
            }
        }
        Ok(Search {
            k,
            m,
            slots,
            alive: vec![slots; copies.len()],
            dead: vec![false; copies.len() * slots],
            copies,
            order,
            touch,
            color: vec![0; n * m],
            max_color: vec![0; n],
            trail: Vec::new(),
            nodes: 0,
            budget,
        })
    }

    /// `Some(true)`: complete good assignment; `Some(false)`: subtree exhausted;
    /// `None`: budget hit.
    fn dfs(&mut self, p: usize) -> Option<bool> {
        if p == self.order.len() {
            return Some(true);
        }
        let (v, e) = self.order[p];
        let cell = v * self.m + e;
        let old_max = self.max_color[v];
        let top = (old_max + 1).min(self.k);
        let touch = std::mem::take(&mut self.touch[p]);
        let mut result = Some(false);
        for c in 1..=top {
            self.nodes += 1;
            if self.nodes > self.budget {
                result = None;
                break;
            }
            self.color[cell] = c;
            self.max_color[v] = old_max.max(c);
            let mark = self.trail.len();
            let mut ok = true;
            for &(t, slot) in &touch {
                let d = t * self.slots + slot;
                if self.dead[d] {
                    continue;
                }
                let m = self.m;
                if self.copies[t].edges.iter().any(|&f| f != e && self.color[v * m + f] == c) {
                    self.dead[d] = true;
                    self.trail.push(d);
                    self.alive[t] -= 1;
                    if self.alive[t] == 0 {
                        ok = false;
                        break;
                    }
                }
            }
            let sub = if ok { self.dfs(p + 1) } else { Some(false) };
            if sub != Some(false) {
                result = sub;
                break;
            }
            while self.trail.len() > mark {
                let d = self.trail.pop().unwrap();
                self.dead[d] = false;
                self.alive[d / self.slots] += 1;
            }
            self.max_color[v] = old_max;
            self.color[cell] = 0;
        }
        self.touch[p] = touch;
        result
    }
}

fn check_fit(n: usize, pattern: &PatternGraph, k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if pattern.num_vertices() > n {
        return Err(Error::PatternLargerThanHost { pattern: pattern.num_vertices(), host: n });
    }
    Ok(())
}

fn verified(family: ColoringFamily, pattern: &PatternGraph) -> Result<Decision> {
    if !family_is_good(&family, pattern)?.is_good {
        return Err(Error::Internal("search produced a family that is not good".into()));
    }
    Ok(Decision::Good(family))
}

/// Whether some family of `n` colorings with `k` colors is good for `pattern`.
pub fn decide_good_exists(n: usize, pattern: &PatternGraph, k: u32) -> Result<Decision> {
    decide_good_exists_with(n, pattern, k, &ExactOptions::default())
}

pub fn decide_good_exists_with(
    n: usize,
    pattern: &PatternGraph,
    k: u32,
    opts: &ExactOptions,
) -> Result<Decision> {
    check_fit(n, pattern, k)?;
    if (k as usize) < pattern.num_edges() {
        // no coloring is rainbow on more edges than colors
        return Ok(Decision::NoGood);
    }
    let copies = copy_count(pattern, n)?;
    if copies > opts.max_copies {
        return Ok(Decision::Undecided { reason: format!("{copies} copies exceed {}", opts.max_copies) });
    }
    let mut search = Search::new(n, pattern, k, opts.node_budget)?;
    match search.dfs(0) {
        Some(true) => {
            let colors = search.color.iter().map(|&c| c.max(1)).collect();
            verified(ColoringFamily::from_dense(n, k, colors)?, pattern)
        }
        Some(false) => Ok(Decision::NoGood),
        None => Ok(Decision::Undecided { reason: format!("node budget {} exhausted", opts.node_budget) }),
    }
}

/// Tries every family in `[k]^{n * C(n,2)}`; refuses above `max_families`.
pub fn decide_exhaustive(n: usize, pattern: &PatternGraph, k: u32, max_families: u128) -> Result<Decision> {
    check_fit(n, pattern, k)?;
    let cells = n * host_edge_count(n);
    let total = (k as u128).checked_pow(cells as u32).unwrap_or(u128::MAX);
    if total > max_families {
        return Err(Error::ScaleGuard { what: "exhaustive family loop".into(), needed: total, limit: max_families });
    }
    let copies: Vec<_> = enumerate_copies(pattern, n)?.collect();
    let mut colors = vec![1u32; cells];
    loop {
        let f = ColoringFamily::from_dense(n, k, colors.clone())?;
        if copies.iter().all(|emb| crate::verify::copy_is_good(&f, pattern, emb)) {
            return verified(f, pattern);
        }
        let mut i = 0;
        loop {
            if i == cells {
                return Ok(Decision::NoGood);
            }
            if colors[i] < k {
                colors[i] += 1;
                break;
            }
            colors[i] = 1;
            i += 1;
        }
    }
}

/// Scans `k = 1..=k_max`; exact when some `k` is good and every smaller one
/// was refuted, a bracket otherwise.
pub fn compute_c(n: usize, pattern: &PatternGraph, k_max: u32) -> Result<ExactResult> {
    compute_c_with(n, pattern, k_max, &ExactOptions::default())
}

pub fn compute_c_with(n: usize, pattern: &PatternGraph, k_max: u32, opts: &ExactOptions) -> Result<ExactResult> {
    check_fit(n, pattern, 1)?;
    let mut lower = 1;
    let mut refuted_all_below = true;
    let mut witness = None;
    let mut upper = None;
    for k in 1..=k_max {
        match decide_good_exists_with(n, pattern, k, opts)? {
            Decision::NoGood => {
                if refuted_all_below {
                    lower = k + 1;
                }
            }
            Decision::Undecided { .. } => refuted_all_below = false,
            Decision::Good(f) => {
                upper = Some(k);
                witness = Some(f);
                break;
            }
        }
    }
    let value = match upper {
        Some(u) if u == lower => ExactValue::Exact(u),
        _ => ExactValue::Bracket { lower, upper },
    };
    Ok(ExactResult { n, pattern: pattern.clone(), value, witness_family: witness, method: Method::Backtracking })
}
