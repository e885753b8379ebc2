//! Subgraph containment for small patterns (both sides at most 64 vertices;
//! intended for graphs of roughly 20 vertices or fewer).
//!
//! Plain backtracking: needle vertices are ordered so each one has as many
//! already-placed neighbours as possible, and a haystack candidate must have
//! enough degree and be adjacent to the images of every placed neighbour.

use crate::model::PatternGraph;

/// Returns `map` with `map[u]` the haystack vertex for needle vertex `u`, such
/// that every needle edge lands on a haystack edge, or `None`.
pub fn subgraph_contains(haystack: &PatternGraph, needle: &PatternGraph) -> Option<Vec<usize>> {
    let nv = needle.num_vertices();
    let hv = haystack.num_vertices();
    if nv > hv || needle.num_edges() > haystack.num_edges() {
        return None;
    }
    let n_adj = needle.adjacency();
    let h_adj = haystack.adjacency();
    let n_deg = needle.degrees();
    let h_deg = haystack.degrees();

    let order = search_order(&n_adj, &n_deg);
    let mut map = vec![usize::MAX; nv];
    let mut used = 0u64;
    if place(0, &order, &n_adj, &n_deg, &h_adj, &h_deg, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

fn search_order(adj: &[u64], deg: &[usize]) -> Vec<usize> {
    let n = adj.len();
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    while order.len() < n {
        let next = (0..n)
            .filter(|&u| placed & (1 << u) == 0)
            .max_by_key(|&u| ((adj[u] & placed).count_ones(), deg[u], std::cmp::Reverse(u)))
            .unwrap();
        placed |= 1 << next;
        order.push(next);
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn place(
    depth: usize,
    order: &[usize],
    n_adj: &[u64],
    n_deg: &[usize],
    h_adj: &[u64],
    h_deg: &[usize],
    map: &mut [usize],
    used: &mut u64,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let u = order[depth];
    let mut required = 0u64;
    let mut nb = n_adj[u];
    while nb != 0 {
        let w = nb.trailing_zeros() as usize;
        nb &= nb - 1;
        if map[w] != usize::MAX {
            required |= 1 << map[w];
        }
    }
    for cand in 0..h_adj.len() {
        if *used & (1 << cand) != 0 || h_deg[cand] < n_deg[u] {
            continue;
        }
        if h_adj[cand] & required != required {
            continue;
        }
        map[u] = cand;
        *used |= 1 << cand;
        if place(depth + 1, order, n_adj, n_deg, h_adj, h_deg, map, used) {
            return true;
        }
        *used &= !(1 << cand);
        map[u] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> PatternGraph {
        PatternGraph::named(name).unwrap()
    }

    fn assert_valid(h: &PatternGraph, n: &PatternGraph, map: &[usize]) {
        let mut seen = std::collections::HashSet::new();
        assert!(map.iter().all(|&x| x < h.num_vertices() && seen.insert(x)));
        for &(a, b) in n.edges() {
            assert!(h.has_edge(map[a], map[b]));
        }
    }

    #[test]
    fn k4_contains_c4_not_p4() {
        let map = subgraph_contains(&g("K4"), &g("C4")).unwrap();
        assert_valid(&g("K4"), &g("C4"), &map);
        assert!(subgraph_contains(&g("K4"), &g("P4")).is_none());
    }

    #[test]
    fn long_paths_contain_two_disjoint_cherries() {
        let map = subgraph_contains(&g("P5"), &g("P2+P2")).unwrap();
        assert_valid(&g("P5"), &g("P2+P2"), &map);
        assert!(subgraph_contains(&g("P4"), &g("P2+P2")).is_none());
    }

    #[test]
    fn paths_contain_matchings() {
        assert!(subgraph_contains(&g("P7"), &g("I4")).is_some());
        assert!(subgraph_contains(&g("P6"), &g("I4")).is_none());
        assert!(subgraph_contains(&g("P8"), &g("P2+3K2")).is_some());
    }

    #[test]
    fn isolated_needle_vertices_need_room() {
        let needle = g("K2").with_isolated(2).unwrap();
        assert!(subgraph_contains(&g("P2"), &needle).is_none());
        assert!(subgraph_contains(&g("P3"), &needle).is_some());
    }

    #[test]
    fn bipartite_inside_clique() {
        let map = subgraph_contains(&g("K6"), &g("K3,3")).unwrap();
        assert_valid(&g("K6"), &g("K3,3"), &map);
        assert!(subgraph_contains(&g("K3,3"), &g("K3")).is_none());
    }
}
