//! Structural graph statistics: chordality, chordal girth, treewidth bounds,
//! and series-parallel recognition.

use crate::graph::Graph;
use serde::{Deserialize, Serialize};

/// Vertex count above which the exact treewidth DP is skipped and the
/// clique-number / min-fill bounds are reported instead.
pub const TREEWIDTH_EXACT_THRESHOLD: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub num_vertices: usize,
    pub num_edges: usize,
    pub is_connected: bool,
    pub is_chordal: bool,
    /// Smallest induced cycle with at least 4 vertices; `None` iff chordal.
    pub chordal_girth: Option<usize>,
    pub clique_number: usize,
    pub treewidth_lower: usize,
    pub treewidth_upper: usize,
    pub is_series_parallel: bool,
}

/// Computes all statistics with the default exact-treewidth threshold.
pub fn graph_stats(g: &Graph) -> GraphStats {
    graph_stats_with_threshold(g, TREEWIDTH_EXACT_THRESHOLD)
}

pub fn graph_stats_with_threshold(g: &Graph, exact_tw_threshold: usize) -> GraphStats {
    let n = g.num_vertices();
    let omega = g.clique_number();
    let (tw_lower, tw_upper) = if n <= exact_tw_threshold {
        let tw = treewidth_exact(g);
        (tw, tw)
    } else {
        (omega.saturating_sub(1), min_fill_width(g))
    };
    GraphStats {
        num_vertices: n,
        num_edges: g.num_edges(),
        is_connected: n <= 1 || g.num_components() == 1,
        is_chordal: is_chordal(g),
        chordal_girth: chordal_girth(g),
        clique_number: omega,
        treewidth_lower: tw_lower,
        treewidth_upper: tw_upper,
        is_series_parallel: is_series_parallel(g),
    }
}

/// Maximum cardinality search: visit order, highest weight first, lowest
/// index on ties. The reversed visit order is a perfect elimination ordering
/// exactly when the graph is chordal.
pub fn mcs_order(g: &Graph) -> Vec<usize> {
    let n = g.num_vertices();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .max_by_key(|&v| (weight[v], usize::MAX - v))
            .unwrap();
        visited[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !visited[w] {
                weight[w] += 1;
            }
        }
    }
    order
}

/// Perfect elimination ordering when the graph is chordal (reversed MCS
/// order), `None` otherwise.
pub fn perfect_elimination_ordering(g: &Graph) -> Option<Vec<usize>> {
    let mut order = mcs_order(g);
    order.reverse();
    if verify_peo(g, &order) {
        Some(order)
    } else {
        None
    }
}

/// Checks that for every vertex, its neighbors appearing later in the order
/// form a clique.
pub fn verify_peo(g: &Graph, order: &[usize]) -> bool {
    let n = g.num_vertices();
    let mut pos = vec![0usize; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    for &v in order {
        let later: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| pos[w] > pos[v])
            .collect();
        for i in 0..later.len() {
            for j in (i + 1)..later.len() {
                if !g.has_edge(later[i], later[j]) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_chordal(g: &Graph) -> bool {
    perfect_elimination_ordering(g).is_some()
}

/// Smallest induced cycle with >= 4 vertices, `None` when chordal.
///
/// For an edge {a, b}, the shortest induced cycle of length >= 4 through it
/// is one plus the shortest a-b path in the graph with the edge removed and
/// all common neighbors of a and b deleted: such a path has no length-2
/// shortcut, BFS-shortest paths are induced, and re-adding {a, b} closes an
/// induced cycle.
pub fn chordal_girth(g: &Graph) -> Option<usize> {
    let mut best: Option<usize> = None;
    for &(a, b) in g.edges() {
        let common: std::collections::HashSet<usize> = g
            .neighbors(a)
            .iter()
            .copied()
            .filter(|&w| g.has_edge(b, w))
            .collect();
        let keep: Vec<usize> = (0..g.num_vertices())
            .filter(|v| !common.contains(v))
            .collect();
        let (h, old) = g.induced_subgraph(&keep).unwrap();
        let mut pos = std::collections::HashMap::new();
        for (k, &v) in old.iter().enumerate() {
            pos.insert(v, k);
        }
        let (ha, hb) = (pos[&a], pos[&b]);
        // drop the edge {a, b} itself before measuring the distance
        let edges: Vec<(usize, usize)> = h
            .edges()
            .iter()
            .copied()
            .filter(|&e| e != (ha.min(hb), ha.max(hb)))
            .collect();
        let h = Graph::new(h.num_vertices(), &edges).unwrap();
        let dist = h.distances_from(ha)[hb];
        if dist != usize::MAX {
            let cycle_len = dist + 1;
            debug_assert!(cycle_len >= 4);
            best = Some(best.map_or(cycle_len, |b: usize| b.min(cycle_len)));
        }
    }
    best
}

/// One vertex set of a minimum induced cycle with >= 4 vertices, in cycle
/// order. `None` when chordal.
pub fn minimum_induced_cycle(g: &Graph) -> Option<Vec<usize>> {
    let target = chordal_girth(g)?;
    for &(a, b) in g.edges() {
        let common: std::collections::HashSet<usize> = g
            .neighbors(a)
            .iter()
            .copied()
            .filter(|&w| g.has_edge(b, w))
            .collect();
        let keep: Vec<usize> = (0..g.num_vertices())
            .filter(|v| !common.contains(v))
            .collect();
        let (h, old) = g.induced_subgraph(&keep).unwrap();
        let mut pos = std::collections::HashMap::new();
        for (k, &v) in old.iter().enumerate() {
            pos.insert(v, k);
        }
        let (ha, hb) = (pos[&a], pos[&b]);
        let edges: Vec<(usize, usize)> = h
            .edges()
            .iter()
            .copied()
            .filter(|&e| e != (ha.min(hb), ha.max(hb)))
            .collect();
        let h = Graph::new(h.num_vertices(), &edges).unwrap();
        if let Some(path) = h.shortest_path(ha, hb).unwrap() {
            if path.len() == target {
                return Some(path.into_iter().map(|v| old[v]).collect());
            }
        }
    }
    None
}

/// Exact treewidth by elimination-ordering dynamic programming over vertex
/// subsets. Intended for graphs with at most ~16 vertices.
pub fn treewidth_exact(g: &Graph) -> usize {
    let n = g.num_vertices();
    if n == 0 {
        return 0;
    }
    assert!(n <= 24, "exact treewidth DP limited to small graphs");
    // q(s, v): vertices outside s and v reachable from v through s only
    let q = |s: u32, v: usize| -> usize {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut count = 0;
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                let bit = 1u32 << w;
                if seen & bit != 0 {
                    continue;
                }
                seen |= bit;
                if s & bit != 0 {
                    stack.push(w);
                } else {
                    count += 1;
                }
            }
        }
        count
    };
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut f = vec![usize::MAX; (full as usize) + 1];
    f[0] = 0;
    for s in 1..=full {
        let mut best = usize::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let prev = s & !(1u32 << v);
            let cost = f[prev as usize].max(q(prev, v));
            best = best.min(cost);
        }
        f[s as usize] = best;
    }
    f[full as usize]
}

/// Min-fill elimination width: a treewidth upper bound, exact on chordal
/// graphs (where a zero-fill vertex always exists).
pub fn min_fill_width(g: &Graph) -> usize {
    let n = g.num_vertices();
    let mut adj: Vec<std::collections::BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive: Vec<bool> = vec![true; n];
    let mut width = 0;
    for _ in 0..n {
        // fill count for each live vertex
        let mut best_v = usize::MAX;
        let mut best_fill = usize::MAX;
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0;
            for i in 0..nb.len() {
                for j in (i + 1)..nb.len() {
                    if !adj[nb[i]].contains(&nb[j]) {
                        fill += 1;
                    }
                }
            }
            if fill < best_fill {
                best_fill = fill;
                best_v = v;
            }
        }
        let v = best_v;
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        width = width.max(nb.len());
        for i in 0..nb.len() {
            for j in (i + 1)..nb.len() {
                adj[nb[i]].insert(nb[j]);
                adj[nb[j]].insert(nb[i]);
            }
        }
        for &w in &nb {
            adj[w].remove(&v);
        }
        adj[v].clear();
        alive[v] = false;
    }
    width
}

/// Series-parallel (equivalently K4-minor-free) recognition by exhaustive
/// series/parallel/pendant reduction on a multigraph copy: a graph is
/// series-parallel iff the reduction deletes every edge, since any stuck
/// remainder has minimum degree 3 and therefore a K4 minor.
pub fn is_series_parallel(g: &Graph) -> bool {
    let n = g.num_vertices();
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    loop {
        if edges.is_empty() {
            return true;
        }
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        // parallel reduction: drop one of a duplicated pair
        let mut sorted = edges.clone();
        sorted.sort_unstable();
        let mut dup = None;
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                dup = Some(w[0]);
                break;
            }
        }
        if let Some(e) = dup {
            let idx = edges.iter().position(|&x| x == e).unwrap();
            edges.remove(idx);
            continue;
        }
        // pendant removal
        if let Some(v) = (0..n).find(|&v| degree[v] == 1) {
            edges.retain(|&(a, b)| a != v && b != v);
            continue;
        }
        // series reduction at a degree-2 vertex
        if let Some(v) = (0..n).find(|&v| degree[v] == 2) {
            let incident: Vec<(usize, usize)> = edges
                .iter()
                .copied()
                .filter(|&(a, b)| a == v || b == v)
                .collect();
            edges.retain(|&(a, b)| a != v && b != v);
            let other = |(a, b): (usize, usize)| if a == v { b } else { a };
            let (x, y) = (other(incident[0]), other(incident[1]));
            if x != y {
                edges.push((x.min(y), x.max(y)));
            }
            continue;
        }
        // every remaining vertex with an edge has degree >= 3
        return false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    /// Brute-force chordality: search for any induced cycle with >= 4
    /// vertices by extending induced paths.
    fn chordal_brute(g: &Graph) -> bool {
        fn extend(g: &Graph, path: &mut Vec<usize>) -> bool {
            let first = path[0];
            let last = *path.last().unwrap();
            if path.len() >= 4 && g.has_edge(first, last) {
                // closing chord makes an induced cycle iff no other adjacency,
                // which the induced-path invariant already guarantees
                return true;
            }
            for w in 0..g.num_vertices() {
                if path.contains(&w) || !g.has_edge(last, w) {
                    continue;
                }
                // keep the path induced: w may touch only `last`, except the
                // closure check above handles `first`
                let bad = path[..path.len() - 1]
                    .iter()
                    .any(|&p| g.has_edge(p, w) && !(p == first && path.len() >= 3));
                if bad {
                    continue;
                }
                if path.len() >= 3 && g.has_edge(first, w) {
                    return true;
                }
                path.push(w);
                if extend(g, path) {
                    return true;
                }
                path.pop();
            }
            false
        }
        for a in 0..g.num_vertices() {
            for &b in g.neighbors(a) {
                if b < a {
                    continue;
                }
                let mut path = vec![a, b];
                if extend(g, &mut path) {
                    return false;
                }
            }
        }
        true
    }

    fn seeded_graph(n: usize, p_numer: u64, seed: u64) -> Graph {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).max(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if next() % 100 < p_numer {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn pentagon_stats() {
        let s = graph_stats(&Graph::cycle(5));
        assert!(!s.is_chordal);
        assert_eq!(s.chordal_girth, Some(5));
        assert_eq!((s.treewidth_lower, s.treewidth_upper), (2, 2));
        assert!(s.is_series_parallel);
        assert!(s.is_connected);
    }

    #[test]
    fn complete_four_stats() {
        let s = graph_stats(&Graph::complete(4));
        assert!(s.is_chordal);
        assert_eq!(s.chordal_girth, None);
        assert_eq!((s.treewidth_lower, s.treewidth_upper), (3, 3));
        assert!(!s.is_series_parallel);
        assert_eq!(s.clique_number, 4);
    }

    #[test]
    fn path_stats() {
        let s = graph_stats(&Graph::path(4));
        assert!(s.is_chordal);
        assert!(s.is_series_parallel);
        assert_eq!((s.treewidth_lower, s.treewidth_upper), (1, 1));
    }

    #[test]
    fn petersen_stats() {
        let s = graph_stats(&Graph::petersen());
        assert!(!s.is_chordal);
        assert_eq!(s.chordal_girth, Some(5));
        assert!(!s.is_series_parallel);
        assert_eq!(s.clique_number, 2);
        assert_eq!((s.treewidth_lower, s.treewidth_upper), (4, 4));
    }

    #[test]
    fn diamond_is_chordal() {
        let g = Graph::new(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(is_chordal(&g));
        assert_eq!(chordal_girth(&g), None);
    }

    #[test]
    fn girth_of_cycles_and_wheel() {
        for n in 4..=9 {
            assert_eq!(chordal_girth(&Graph::cycle(n)), Some(n));
            let cyc = minimum_induced_cycle(&Graph::cycle(n)).unwrap();
            assert_eq!(cyc.len(), n);
        }
        // wheel on 5 vertices: rim 4-cycle is induced? no: every rim pair is
        // linked through the hub, but the hub is adjacent to everything, so
        // the rim cycle 1-2-3-4 has no chord; it is the minimum induced cycle
        assert_eq!(chordal_girth(&Graph::wheel(5)), Some(4));
    }

    #[test]
    fn minimum_induced_cycle_is_induced() {
        for g in [
            Graph::wheel(6),
            Graph::petersen(),
            Graph::cycle(7).lengthen(2).unwrap(),
        ] {
            let cyc = minimum_induced_cycle(&g).unwrap();
            let k = cyc.len();
            assert_eq!(chordal_girth(&g), Some(k));
            for i in 0..k {
                for j in (i + 1)..k {
                    let adjacent = j == i + 1 || (i == 0 && j == k - 1);
                    assert_eq!(g.has_edge(cyc[i], cyc[j]), adjacent, "pair {i},{j}");
                }
            }
        }
    }

    #[test]
    fn chordality_matches_brute_force_on_random_graphs() {
        for seed in 0..120u64 {
            let n = 4 + (seed % 5) as usize; // up to 8 vertices
            let g = seeded_graph(n, 40 + seed % 40, seed + 1);
            let fast = is_chordal(&g);
            let slow = chordal_brute(&g);
            assert_eq!(fast, slow, "disagree on seed {seed}: {:?}", g.edges());
            assert_eq!(
                chordal_girth(&g).is_none(),
                fast,
                "girth vs chordality, seed {seed}"
            );
        }
    }

    #[test]
    fn treewidth_dp_matches_factorial_oracle() {
        // direct minimum over all elimination orderings for tiny graphs
        fn tw_oracle(g: &Graph) -> usize {
            let n = g.num_vertices();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut best = usize::MAX;
            permute(&mut perm, 0, g, &mut best);
            fn permute(perm: &mut Vec<usize>, k: usize, g: &Graph, best: &mut usize) {
                let n = perm.len();
                if k == n {
                    let mut adj: Vec<std::collections::BTreeSet<usize>> = (0..n)
                        .map(|v| g.neighbors(v).iter().copied().collect())
                        .collect();
                    let mut width = 0;
                    for &v in perm.iter() {
                        let nb: Vec<usize> = adj[v].iter().copied().collect();
                        width = width.max(nb.len());
                        for i in 0..nb.len() {
                            for j in (i + 1)..nb.len() {
                                adj[nb[i]].insert(nb[j]);
                                adj[nb[j]].insert(nb[i]);
                            }
                        }
                        for &w in &nb {
                            adj[w].remove(&v);
                        }
                        adj[v].clear();
                    }
                    *best = (*best).min(width);
                    return;
                }
                for i in k..n {
                    perm.swap(k, i);
                    permute(perm, k + 1, g, best);
                    perm.swap(k, i);
                }
            }
            best
        }
        for seed in 0..25u64 {
            let n = 3 + (seed % 4) as usize; // up to 6 vertices
            let g = seeded_graph(n, 50, seed + 7);
            assert_eq!(treewidth_exact(&g), tw_oracle(&g), "seed {seed}");
        }
    }

    #[test]
    fn treewidth_bounds_sandwich_on_random_graphs() {
        for seed in 0..40u64 {
            let n = 4 + (seed % 5) as usize;
            let g = seeded_graph(n, 45, seed + 3);
            let exact = treewidth_exact(&g);
            let omega = g.clique_number();
            assert!(exact + 1 >= omega, "clique lower bound violated");
            assert!(min_fill_width(&g) >= exact, "min-fill below exact");
        }
    }

    #[test]
    fn series_parallel_family() {
        assert!(is_series_parallel(&Graph::cycle(6)));
        assert!(is_series_parallel(&Graph::path(5)));
        assert!(is_series_parallel(&Graph::empty(3)));
        // theta graph: two vertices joined by three internally disjoint paths
        let theta = Graph::new(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]).unwrap();
        assert!(is_series_parallel(&theta));
        assert!(!is_series_parallel(&Graph::complete(4)));
        assert!(!is_series_parallel(&Graph::wheel(5)));
        assert!(!is_series_parallel(&Graph::petersen()));
        // K4 subdivided still has the K4 minor
        assert!(!is_series_parallel(
            &Graph::complete(4).lengthen(2).unwrap()
        ));
        // two disjoint cycles
        let two = Graph::new(
            8,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 4),
            ],
        )
        .unwrap();
        assert!(is_series_parallel(&two));
    }

    #[test]
    fn mcs_gives_peo_on_chordal_graphs() {
        for g in [Graph::complete(5), Graph::path(6), Graph::wheel(5 + 1)] {
            // wheel(6) is not chordal (rim 5-cycle is induced), so check split
            if is_chordal(&g) {
                let peo = perfect_elimination_ordering(&g).unwrap();
                assert!(verify_peo(&g, &peo));
            }
        }
        let chordal =
            Graph::new(6, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5)]).unwrap();
        let peo = perfect_elimination_ordering(&chordal).unwrap();
        assert!(verify_peo(&chordal, &peo));
    }
}
