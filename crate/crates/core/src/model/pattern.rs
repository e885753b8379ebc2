use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::iso::subgraph_contains;

/// Canonical names for the small target graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternTag {
    /// `P_t`: path with `t` edges.
    Path(usize),
    /// `S_t`: star with `t` leaves.
    Star(usize),
    /// `I_t`: matching with `t` edges.
    Matching(usize),
    /// `C_t`: cycle on `t` vertices.
    Cycle(usize),
    /// `K_r`; `K_1` is an isolated vertex and `K_2` a single edge.
    Clique(usize),
    /// `K_{s,t}`.
    CompleteBipartite(usize, usize),
    /// Vertex-disjoint union, parts in order.
    Union(Vec<PatternTag>),
}

impl PatternTag {
    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            PatternTag::Path(t) | PatternTag::Star(t) | PatternTag::Matching(t) if t == 0 => {
                bad(format!("{self} needs at least one edge"))
            }
            PatternTag::Cycle(t) if t < 3 => bad(format!("cycle length {t} < 3")),
            PatternTag::Clique(0) => bad("K_0 is empty".into()),
            PatternTag::CompleteBipartite(s, t) if s == 0 || t == 0 => {
                bad(format!("K_{{{s},{t}}} needs nonempty sides"))
            }
            PatternTag::Union(ref parts) => {
                if parts.is_empty() {
                    return bad("empty union".into());
                }
                parts.iter().try_for_each(|p| p.validate())
            }
            _ => Ok(()),
        }
    }

    fn build(&self, offset: usize, edges: &mut Vec<(usize, usize)>) -> usize {
        match *self {
            PatternTag::Path(t) => {
                edges.extend((0..t).map(|i| (offset + i, offset + i + 1)));
                t + 1
            }
            PatternTag::Star(t) => {
                edges.extend((1..=t).map(|i| (offset, offset + i)));
                t + 1
            }
            PatternTag::Matching(t) => {
                edges.extend((0..t).map(|i| (offset + 2 * i, offset + 2 * i + 1)));
                2 * t
            }
            PatternTag::Cycle(t) => {
                edges.extend((0..t - 1).map(|i| (offset + i, offset + i + 1)));
                edges.push((offset, offset + t - 1));
                t
            }
            PatternTag::Clique(r) => {
                for a in 0..r {
                    for b in a + 1..r {
                        edges.push((offset + a, offset + b));
                    }
                }
                r
            }
            PatternTag::CompleteBipartite(s, t) => {
                for a in 0..s {
                    for b in 0..t {
                        edges.push((offset + a, offset + s + b));
                    }
                }
                s + t
            }
            PatternTag::Union(ref parts) => {
                let mut used = 0;
                for part in parts {
                    used += part.build(offset + used, edges);
                }
                used
            }
        }
    }
}

impl fmt::Display for PatternTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTag::Path(t) => write!(f, "P{t}"),
            PatternTag::Star(t) => write!(f, "S{t}"),
            PatternTag::Matching(t) => write!(f, "I{t}"),
            PatternTag::Cycle(t) => write!(f, "C{t}"),
            PatternTag::Clique(r) => write!(f, "K{r}"),
            PatternTag::CompleteBipartite(s, t) => write!(f, "K{s},{t}"),
            PatternTag::Union(parts) => {
                // consecutive equal parts collapse to a multiplicity prefix
                let mut i = 0;
                let mut first = true;
                while i < parts.len() {
                    let mut j = i;
                    while j < parts.len() && parts[j] == parts[i] {
                        j += 1;
                    }
                    if !first {
                        write!(f, "+")?;
                    }
                    first = false;
                    if j - i > 1 {
                        write!(f, "{}", j - i)?;
                    }
                    write!(f, "{}", parts[i])?;
                    i = j;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for PatternTag {
    type Err = Error;

    /// Accepts `P4`, `S5`, `I7`, `C4`, `K8`, `K7,7`, `K_{7,7}` and unions joined
    /// by `+` (or `⊔`) with optional multiplicities: `P2+3K2`, `S4+K1`.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '{' | '}' | ' '))
            .map(|c| if c == '⊔' { '+' } else { c })
            .collect();
        if cleaned.is_empty() {
            return Err(Error::MalformedPattern("empty pattern name".into()));
        }
        let mut parts = Vec::new();
        for term in cleaned.split('+') {
            let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
            let mult = if digits == 0 {
                1
            } else {
                term[..digits]
                    .parse::<usize>()
                    .map_err(|e| Error::MalformedPattern(format!("{term}: {e}")))?
            };
            if mult == 0 {
                return Err(Error::MalformedPattern(format!("zero multiplicity in {term}")));
            }
            let base = parse_base(&term[digits..])?;
            parts.extend(std::iter::repeat_n(base, mult));
        }
        let tag = if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            PatternTag::Union(parts)
        };
        tag.validate()?;
        Ok(tag)
    }
}

fn parse_base(term: &str) -> Result<PatternTag> {
    let malformed = || Error::MalformedPattern(format!("unrecognised pattern term `{term}`"));
    let mut chars = term.chars();
    let head = chars.next().ok_or_else(malformed)?;
    let rest = chars.as_str();
    let num = |s: &str| s.parse::<usize>().map_err(|_| malformed());
    Ok(match head.to_ascii_uppercase() {
        'P' => PatternTag::Path(num(rest)?),
        'S' => PatternTag::Star(num(rest)?),
        'I' => PatternTag::Matching(num(rest)?),
        'C' => PatternTag::Cycle(num(rest)?),
        'K' => match rest.split_once(',') {
            Some((s, t)) => PatternTag::CompleteBipartite(num(s)?, num(t)?),
            None => PatternTag::Clique(num(rest)?),
        },
        _ => return Err(malformed()),
    })
}

/// A small target graph `H`. Isolated vertices are explicit: they are counted in
/// `num_vertices` and simply carry no edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternGraph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<PatternTag>,
}

impl PatternGraph {
    /// Builds a pattern from an explicit edge list; endpoints are normalised to
    /// `(min, max)`.
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut normalised = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b {
                return Err(Error::MalformedPattern(format!("self-loop at {a}")));
            }
            if a >= num_vertices || b >= num_vertices {
                return Err(Error::MalformedPattern(format!(
                    "edge ({a},{b}) outside {num_vertices} vertices"
                )));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::MalformedPattern(format!("duplicate edge ({},{})", e.0, e.1)));
            }
            normalised.push(e);
        }
        if num_vertices > 64 {
            return Err(Error::MalformedPattern(format!(
                "{num_vertices} vertices exceeds the 64-vertex pattern limit"
            )));
        }
        Ok(PatternGraph { num_vertices, edges: normalised, name: None })
    }

    /// Constructs the named graph.
    pub fn from_tag(tag: &PatternTag) -> Result<Self> {
        tag.validate()?;
        let mut edges = Vec::new();
        let v = tag.build(0, &mut edges);
        let mut g = PatternGraph::new(v, edges)?;
        g.name = Some(tag.clone());
        Ok(g)
    }

    pub fn named(name: &str) -> Result<Self> {
        Self::from_tag(&name.parse()?)
    }

    /// Adds `r` isolated vertices (the `⊔ rK_1` padding).
    pub fn with_isolated(&self, r: usize) -> Result<Self> {
        let mut g = PatternGraph::new(self.num_vertices + r, self.edges.clone())?;
        g.name = self.name.as_ref().map(|t| {
            let mut parts = match t {
                PatternTag::Union(p) => p.clone(),
                other => vec![other.clone()],
            };
            parts.extend(std::iter::repeat_n(PatternTag::Clique(1), r));
            if parts.len() == 1 {
                parts.pop().unwrap()
            } else {
                PatternTag::Union(parts)
            }
        });
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn name(&self) -> Option<&PatternTag> {
        self.name.as_ref()
    }

    pub fn set_name(&mut self, name: Option<PatternTag>) {
        self.name = name;
    }

    pub fn label(&self) -> String {
        match &self.name {
            Some(t) => t.to_string(),
            None => format!("H(v={},e={})", self.num_vertices, self.edges.len()),
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn isolated_count(&self) -> usize {
        self.degrees().iter().filter(|&&d| d == 0).count()
    }

    /// Adjacency as one bitmask per vertex.
    pub fn adjacency(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.num_vertices];
        for &(a, b) in &self.edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let e = (a.min(b), a.max(b));
        self.edges.contains(&e)
    }

    /// Edges incident to each vertex, as indices into `edges()`.
    pub fn incident_edges(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.num_vertices];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            inc[a].push(i);
            inc[b].push(i);
        }
        inc
    }

    /// Connected components (isolated vertices form their own component).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.num_vertices];
        let mut comps = Vec::new();
        for s in 0..self.num_vertices {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let mut nb = adj[comp[i]];
                while nb != 0 {
                    let u = nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Whether two patterns are isomorphic.
    pub fn is_isomorphic(&self, other: &PatternGraph) -> bool {
        self.num_vertices == other.num_vertices
            && self.edges.len() == other.edges.len()
            && subgraph_contains(self, other).is_some()
    }

    /// Structural check that the canonical tag (if any) names this graph.
    pub fn tag_matches_structure(&self) -> bool {
        match &self.name {
            None => true,
            Some(tag) => match PatternGraph::from_tag(tag) {
                Ok(reference) => reference.is_isomorphic(self),
                Err(_) => false,
            },
        }
    }
}

impl fmt::Display for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}
