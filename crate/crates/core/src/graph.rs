//! Simple undirected graphs on `0..num_vertices` and the vertex maps between
//! them that the rest of the crate pulls structure back along.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Undirected simple graph. Edges are stored sorted with `u < v`; the edge
/// index of a pair is its position in that list and is used everywhere a
/// cochain or off-diagonal vector is indexed by edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl Graph {
    /// Builds a graph, normalizing edge order and dropping duplicates.
    /// Self-loops and out-of-range endpoints are errors.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: a.max(b),
                    num_vertices: n,
                });
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        norm.dedup();
        Ok(Self::from_sorted_unique(n, norm))
    }

    fn from_sorted_unique(n: usize, edges: Vec<(usize, usize)>) -> Graph {
        let mut neighbors = vec![Vec::new(); n];
        let mut edge_index = HashMap::with_capacity(edges.len());
        for (k, &(u, v)) in edges.iter().enumerate() {
            neighbors[u].push(v);
            neighbors[v].push(u);
            edge_index.insert((u, v), k);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Graph {
            n,
            edges,
            neighbors,
            edge_index,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Sorted edge list; position in this slice is the edge index.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && a < self.n && b < self.n && self.edge_index.contains_key(&(a.min(b), a.max(b)))
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                num_vertices: self.n,
            })
        }
    }

    // ----- named constructors used across the crate and its tests -----

    /// Cycle on n >= 3 vertices, edges {i, i+1 mod n}.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    /// Path on n vertices (n - 1 edges).
    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    pub fn empty(n: usize) -> Graph {
        Graph::new(n, &[]).unwrap()
    }

    /// Wheel: vertices 1..n on a cycle, vertex 0 joined to all of them.
    /// `n` counts all vertices, so `wheel(5)` is a 4-cycle plus a hub.
    pub fn wheel(n: usize) -> Graph {
        assert!(n >= 4);
        let rim = n - 1;
        let mut edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        for i in 0..rim {
            edges.push((1 + i, 1 + (i + 1) % rim));
        }
        Graph::new(n, &edges).unwrap()
    }

    /// Petersen graph: outer 5-cycle 0-4, spokes, inner pentagram 5-9.
    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::new(10, &edges).unwrap()
    }

    // ----- structural operations -----

    /// Induced subgraph on `vertices` (sorted, deduplicated), relabeled
    /// densely in that order. Also returns the old-vertex list so callers can
    /// map back.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut vs: Vec<usize> = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        for &v in &vs {
            self.check_vertex(v)?;
        }
        let mut pos = HashMap::new();
        for (k, &v) in vs.iter().enumerate() {
            pos.insert(v, k);
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if let (Some(&a), Some(&b)) = (pos.get(&u), pos.get(&v)) {
                edges.push((a, b));
            }
        }
        Ok((Graph::new(vs.len(), &edges)?, vs))
    }

    /// BFS shortest path between `a` and `b`: vertex sequence including both
    /// endpoints, ties broken toward lower vertex indices. `None` when
    /// disconnected.
    pub fn shortest_path(&self, a: usize, b: usize) -> Result<Option<Vec<usize>>> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Ok(Some(vec![a]));
        }
        let mut prev = vec![usize::MAX; self.n];
        let mut seen = vec![false; self.n];
        let mut queue = std::collections::VecDeque::new();
        seen[a] = true;
        queue.push_back(a);
        while let Some(u) = queue.pop_front() {
            if u == b {
                break;
            }
            for &w in &self.neighbors[u] {
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if !seen[b] {
            return Ok(None);
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        Ok(Some(path))
    }

    /// BFS distances from `a`; `usize::MAX` marks unreachable vertices.
    pub fn distances_from(&self, a: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[a] = 0;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(a);
        while let Some(u) = queue.pop_front() {
            for &w in &self.neighbors[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected component ids (0-based, in order of first BFS discovery).
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in &self.neighbors[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn num_components(&self) -> usize {
        self.components().iter().copied().max().map_or(0, |m| m + 1)
    }

    /// All triangles {a < b < c}, lexicographic.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            for &c in &self.neighbors[a] {
                if c > b && self.has_edge(b, c) {
                    out.push([a, b, c]);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Maximal cliques via Bron-Kerbosch with a max-degree pivot; each clique
    /// is sorted, and the list is sorted for determinism. Isolated vertices
    /// come back as singleton cliques.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut r = Vec::new();
        let p: Vec<usize> = (0..self.n).collect();
        self.bron_kerbosch(&mut r, p, Vec::new(), &mut out);
        for c in &mut out {
            c.sort_unstable();
        }
        out.sort();
        out
    }

    fn bron_kerbosch(
        &self,
        r: &mut Vec<usize>,
        p: Vec<usize>,
        x: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            out.push(r.clone());
            return;
        }
        // pivot: vertex of P union X with most neighbors in P, lowest index on ties
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|&u| {
                let cnt = p.iter().filter(|&&w| self.has_edge(u, w)).count();
                (cnt, usize::MAX - u)
            })
            .unwrap();
        let candidates: Vec<usize> = p
            .iter()
            .copied()
            .filter(|&u| !self.has_edge(pivot, u))
            .collect();
        let mut p = p;
        let mut x = x;
        for u in candidates {
            let p_next: Vec<usize> = p.iter().copied().filter(|&w| self.has_edge(u, w)).collect();
            let x_next: Vec<usize> = x.iter().copied().filter(|&w| self.has_edge(u, w)).collect();
            r.push(u);
            self.bron_kerbosch(r, p_next, x_next, out);
            r.pop();
            p.retain(|&w| w != u);
            x.push(u);
        }
    }

    /// Largest clique size (0 for the empty graph).
    pub fn clique_number(&self) -> usize {
        self.maximal_cliques()
            .iter()
            .map(|c| c.len())
            .max()
            .unwrap_or(0)
    }

    /// Contracts edge {a, b}: the merged vertex keeps index `min(a, b)`,
    /// `max(a, b)` is removed, and vertices above it shift down by one.
    /// Returns the contracted graph and the vertex map from `self` onto it.
    pub fn contract_edge(&self, a: usize, b: usize) -> Result<(Graph, VertexMap)> {
        if !self.has_edge(a, b) {
            return Err(Error::NotAnEdge(format!("{{{a}, {b}}}")));
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let map: Vec<usize> = (0..self.n)
            .map(|v| {
                if v == hi {
                    lo
                } else if v > hi {
                    v - 1
                } else {
                    v
                }
            })
            .collect();
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            let (mu, mv) = (map[u], map[v]);
            if mu != mv {
                edges.push((mu, mv));
            }
        }
        let contracted = Graph::new(self.n - 1, &edges)?;
        let vmap = VertexMap::new(self.clone(), contracted.clone(), map)?;
        Ok((contracted, vmap))
    }

    /// Replaces every edge by a path with `ell` edges through fresh vertices.
    /// `ell = 1` returns the graph unchanged. Fresh vertices are appended in
    /// edge-index order, `ell - 1` per edge.
    pub fn lengthen(&self, ell: usize) -> Result<Graph> {
        if ell == 0 {
            return Err(Error::InvalidParameter("lengthen requires ell >= 1".into()));
        }
        if ell == 1 {
            return Ok(self.clone());
        }
        let mut edges = Vec::new();
        let mut next = self.n;
        for &(u, v) in &self.edges {
            let mut prev = u;
            for _ in 0..(ell - 1) {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            edges.push((prev, v));
        }
        Graph::new(next, &edges)
    }
}

// ----- JSON wire format: {"num_vertices": n, "edges": [[i, j], ...]} -----

#[derive(Serialize, Deserialize)]
struct GraphWire {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphWire {
            num_vertices: self.n,
            edges: self.edges.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Graph, D::Error> {
        let wire = GraphWire::deserialize(d)?;
        // wire form is strict: i < j, in range, no duplicates
        let mut seen = std::collections::HashSet::new();
        for &(i, j) in &wire.edges {
            if i >= j {
                return Err(serde::de::Error::custom(format!(
                    "edge [{i}, {j}] must satisfy i < j"
                )));
            }
            if j >= wire.num_vertices {
                return Err(serde::de::Error::custom(format!(
                    "edge [{i}, {j}] out of range"
                )));
            }
            if !seen.insert((i, j)) {
                return Err(serde::de::Error::custom(format!(
                    "duplicate edge [{i}, {j}]"
                )));
            }
        }
        Graph::new(wire.num_vertices, &wire.edges).map_err(serde::de::Error::custom)
    }
}

/// Map of vertices inducing a graph homomorphism that may collapse edges:
/// every edge {i, j} of the domain has map(i) = map(j) or maps to an edge of
/// the codomain.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexMap {
    pub domain: Graph,
    pub codomain: Graph,
    map: Vec<usize>,
}

impl VertexMap {
    pub fn new(domain: Graph, codomain: Graph, map: Vec<usize>) -> Result<VertexMap> {
        if map.len() != domain.num_vertices() {
            return Err(Error::InvalidVertexMap(format!(
                "map length {} does not match domain order {}",
                map.len(),
                domain.num_vertices()
            )));
        }
        for &img in &map {
            if img >= codomain.num_vertices() {
                return Err(Error::InvalidVertexMap(format!(
                    "image vertex {img} out of range for codomain on {} vertices",
                    codomain.num_vertices()
                )));
            }
        }
        for &(u, v) in domain.edges() {
            if map[u] != map[v] && !codomain.has_edge(map[u], map[v]) {
                return Err(Error::InvalidVertexMap(format!(
                    "edge {{{u}, {v}}} maps to non-edge {{{}, {}}}",
                    map[u], map[v]
                )));
            }
        }
        Ok(VertexMap {
            domain,
            codomain,
            map,
        })
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Domain edges whose endpoints share an image.
    pub fn collapsed_edges(&self) -> Vec<(usize, usize)> {
        self.domain
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| self.map[u] == self.map[v])
            .collect()
    }

    pub fn identity(g: &Graph) -> VertexMap {
        VertexMap {
            domain: g.clone(),
            codomain: g.clone(),
            map: (0..g.num_vertices()).collect(),
        }
    }

    /// `other` after `self` (self: G -> H, other: H -> K gives G -> K).
    pub fn then(&self, other: &VertexMap) -> Result<VertexMap> {
        if self.codomain != other.domain {
            return Err(Error::InvalidVertexMap(
                "composition mismatch: codomain != next domain".into(),
            ));
        }
        let map = self.map.iter().map(|&v| other.map[v]).collect();
        VertexMap::new(self.domain.clone(), other.codomain.clone(), map)
    }

    /// Restriction to an induced subgraph of the domain: the returned map has
    /// domain `domain[vertices]` (densely relabeled) and the same codomain.
    pub fn restrict(&self, vertices: &[usize]) -> Result<VertexMap> {
        let (sub, old) = self.domain.induced_subgraph(vertices)?;
        let map = old.iter().map(|&v| self.map[v]).collect();
        VertexMap::new(sub, self.codomain.clone(), map)
    }
}
