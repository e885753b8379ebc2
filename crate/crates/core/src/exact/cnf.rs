//! DIMACS encoding of "some `k`-coloring family is good for `H` on `K_n`".
//!
//! * `x(v, e, c) = 1 + (v * m + e) * k + (c - 1)`: owner `v` colors host edge
//!   `e` (lexicographic rank) with `c`; exactly one color per cell.
//! * `r(t, i) = n * m * k + 1 + t * |V(H)| + i`: copy `t` is rainbow under the
//!   coloring of its `i`-th vertex. `r` forbids every equal-colored pair of
//!   copy edges, and every copy needs some `r`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{copy_count, enumerate_copies, host_edge_count, ColoringFamily, PatternGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfCounts {
    pub color_vars: u64,
    pub aux_vars: u64,
    pub clauses: u64,
}

impl CnfCounts {
    pub fn vars(&self) -> u64 {
        self.color_vars + self.aux_vars
    }
}

/// Variable and clause counts of the encoding, without building it.
pub fn cnf_counts(n: usize, pattern: &PatternGraph, k: u32) -> Result<CnfCounts> {
    let m = host_edge_count(n) as u64;
    let k = k as u64;
    let copies = copy_count(pattern, n)? as u64;
    let v = pattern.num_vertices() as u64;
    let e = pattern.num_edges() as u64;
    let cells = n as u64 * m;
    let per_cell = 1 + k * k.saturating_sub(1) / 2;
    let per_copy = 1 + v * (e * e.saturating_sub(1) / 2) * k;
    Ok(CnfCounts { color_vars: cells * k, aux_vars: copies * v, clauses: cells * per_cell + copies * per_copy })
}

pub fn write_cnf(n: usize, pattern: &PatternGraph, k: u32, out: &mut impl Write) -> Result<CnfCounts> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let counts = cnf_counts(n, pattern, k)?;
    let m = host_edge_count(n);
    let ku = k as usize;
    let x = |v: usize, e: usize, c: usize| 1 + (v * m + e) * ku + (c - 1);
    let base = n * m * ku + 1;
    let slots = pattern.num_vertices();
    let index = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        a * (2 * n - a - 1) / 2 + (b - a - 1)
    };

    writeln!(out, "c good family: n={n} H={} k={k}", pattern.label())?;
    writeln!(out, "c x(v,e,c) = 1 + (v*{m} + e)*{k} + (c-1) for owner v, edge rank e, color c")?;
    writeln!(out, "c r(t,i) = {base} + t*{slots} + i: copy t rainbow under its i-th vertex")?;
    writeln!(out, "c color vars {}, aux vars {}", counts.color_vars, counts.aux_vars)?;
    for e in 0..m {
        let (mut a, mut r) = (0, e);
        while r >= n - a - 1 {
            r -= n - a - 1;
            a += 1;
        }
        writeln!(out, "c edge {e} = {a}-{}", a + 1 + r)?;
    }
    writeln!(out, "p cnf {} {}", counts.vars(), counts.clauses)?;
    for v in 0..n {
        for e in 0..m {
            let lits: Vec<String> = (1..=ku).map(|c| x(v, e, c).to_string()).collect();
            writeln!(out, "{} 0", lits.join(" "))?;
            for c1 in 1..=ku {
                for c2 in c1 + 1..=ku {
                    writeln!(out, "-{} -{} 0", x(v, e, c1), x(v, e, c2))?;
                }
            }
        }
    }
    for (t, emb) in enumerate_copies(pattern, n)?.enumerate() {
        let edges: Vec<usize> = pattern.edges().iter().map(|&(a, b)| index(emb.image(a), emb.image(b))).collect();
        writeln!(out, "c copy {t}: {:?}", emb.map())?;
        let r = |i: usize| base + t * slots + i;
        let any: Vec<String> = (0..slots).map(|i| r(i).to_string()).collect();
        writeln!(out, "{} 0", any.join(" "))?;
        for (i, &v) in emb.map().iter().enumerate() {
            for p in 0..edges.len() {
                for q in p + 1..edges.len() {
                    for c in 1..=ku {
                        writeln!(out, "-{} -{} -{} 0", r(i), x(v, edges[p], c), x(v, edges[q], c))?;
                    }
                }
            }
        }
    }
    Ok(counts)
}

pub fn export_cnf(n: usize, pattern: &PatternGraph, k: u32, path: impl AsRef<Path>) -> Result<CnfCounts> {
    let mut w = BufWriter::new(File::create(path)?);
    let counts = write_cnf(n, pattern, k, &mut w)?;
    w.flush()?;
    Ok(counts)
}

/// Reads the family off a model given as DIMACS literals (positive = true).
/// Each cell takes its smallest true color.
pub fn decode_model(n: usize, k: u32, literals: &[i64]) -> Result<ColoringFamily> {
    let m = host_edge_count(n);
    let color_vars = n * m * k as usize;
    let mut truth = vec![false; color_vars + 1];
    for &l in literals {
        if l > 0 && (l as usize) <= color_vars {
            truth[l as usize] = true;
        }
    }
    let mut colors = Vec::with_capacity(n * m);
    for cell in 0..n * m {
        let c = (1..=k as usize)
            .find(|&c| truth[1 + cell * k as usize + (c - 1)])
            .ok_or_else(|| Error::InvalidParameter(format!("model gives cell {cell} no color")))?;
        colors.push(c as u32);
    }
    ColoringFamily::from_dense(n, k, colors)
}
