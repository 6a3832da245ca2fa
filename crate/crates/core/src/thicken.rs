//! Thickened graphs: a multidigraph base whose arcs are replaced by marked
//! chordal pieces, and the contraction procedure that reduces every piece to
//! a shortest marked path without changing the additive completion distance.

use crate::graph::{Graph, VertexMap};
use crate::stats::is_chordal;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Directed multigraph: parallel and antiparallel arcs are allowed, loops are
/// not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multidigraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl Multidigraph {
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Multidigraph> {
        for &(t, h) in arcs {
            if t >= n || h >= n {
                return Err(Error::InvalidMultidigraph(format!(
                    "arc ({t}, {h}) out of range for {n} vertices"
                )));
            }
            if t == h {
                return Err(Error::InvalidMultidigraph(format!("loop at vertex {t}")));
            }
        }
        Ok(Multidigraph {
            n,
            arcs: arcs.to_vec(),
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Underlying simple graph (arc directions and multiplicities dropped).
    pub fn underlying(&self) -> Graph {
        Graph::new(self.n, &self.arcs).unwrap()
    }
}

#[derive(Serialize, Deserialize)]
struct ArcWire {
    tail: usize,
    head: usize,
}

#[derive(Serialize, Deserialize)]
struct MultidigraphWire {
    num_vertices: usize,
    arcs: Vec<ArcWire>,
}

impl Serialize for Multidigraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MultidigraphWire {
            num_vertices: self.n,
            arcs: self
                .arcs
                .iter()
                .map(|&(tail, head)| ArcWire { tail, head })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multidigraph {
    fn deserialize<D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Multidigraph, D::Error> {
        let wire = MultidigraphWire::deserialize(d)?;
        let arcs: Vec<(usize, usize)> = wire.arcs.iter().map(|a| (a.tail, a.head)).collect();
        Multidigraph::new(wire.num_vertices, &arcs).map_err(serde::de::Error::custom)
    }
}

/// Connected chordal graph with two distinct marked vertices: `t` is glued to
/// the arc tail, `h` to the arc head.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub graph: Graph,
    pub t: usize,
    pub h: usize,
}

impl Piece {
    pub fn new(graph: Graph, t: usize, h: usize) -> Result<Piece> {
        graph.check_vertex(t)?;
        graph.check_vertex(h)?;
        if t == h {
            return Err(Error::InvalidThickening(
                "marked vertices T and H coincide".into(),
            ));
        }
        Ok(Piece { graph, t, h })
    }

    /// Single edge with T = 0, H = 1: the piece that leaves an arc as-is.
    pub fn edge() -> Piece {
        Piece::new(Graph::new(2, &[(0, 1)]).unwrap(), 0, 1).unwrap()
    }

    /// Path with `ell` edges, marked at its two ends.
    pub fn path(ell: usize) -> Piece {
        assert!(ell >= 1);
        Piece::new(Graph::path(ell + 1), 0, ell).unwrap()
    }

    pub fn marked_distance(&self) -> Option<usize> {
        let d = self.graph.distances_from(self.t)[self.h];
        if d == usize::MAX {
            None
        } else {
            Some(d)
        }
    }
}

/// A thickening recipe: `pieces[k]` is glued along arc `k` of `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThickenedSpec {
    pub base: Multidigraph,
    pub pieces: Vec<Piece>,
}

impl ThickenedSpec {
    pub fn new(base: Multidigraph, pieces: Vec<Piece>) -> Result<ThickenedSpec> {
        let spec = ThickenedSpec { base, pieces };
        spec.validate()?;
        Ok(spec)
    }

    /// Shape checks required before building: one connected chordal piece per
    /// arc with distinct marked vertices.
    pub fn validate(&self) -> Result<()> {
        if self.pieces.len() != self.base.arcs().len() {
            return Err(Error::InvalidThickening(format!(
                "{} pieces for {} arcs",
                self.pieces.len(),
                self.base.arcs().len()
            )));
        }
        for (k, piece) in self.pieces.iter().enumerate() {
            if piece.t == piece.h {
                return Err(Error::InvalidThickening(format!(
                    "piece {k}: marked vertices coincide"
                )));
            }
            piece.graph.check_vertex(piece.t)?;
            piece.graph.check_vertex(piece.h)?;
            if piece.graph.num_vertices() > 0 && piece.graph.num_components() != 1 {
                return Err(Error::InvalidThickening(format!(
                    "piece {k} is disconnected"
                )));
            }
            if !is_chordal(&piece.graph) {
                return Err(Error::InvalidThickening(format!(
                    "piece {k} is not chordal"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PieceWire {
    arc: usize,
    graph: Graph,
    #[serde(rename = "T")]
    t: usize,
    #[serde(rename = "H")]
    h: usize,
}

#[derive(Serialize, Deserialize)]
struct ThickenedSpecWire {
    base: Multidigraph,
    pieces: Vec<PieceWire>,
}

impl Serialize for ThickenedSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ThickenedSpecWire {
            base: self.base.clone(),
            pieces: self
                .pieces
                .iter()
                .enumerate()
                .map(|(arc, p)| PieceWire {
                    arc,
                    graph: p.graph.clone(),
                    t: p.t,
                    h: p.h,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ThickenedSpec {
    fn deserialize<D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<ThickenedSpec, D::Error> {
        let wire = ThickenedSpecWire::deserialize(d)?;
        let num_arcs = wire.base.arcs().len();
        let mut slots: Vec<Option<Piece>> = vec![None; num_arcs];
        for pw in wire.pieces {
            if pw.arc >= num_arcs {
                return Err(serde::de::Error::custom(format!(
                    "piece references arc {} but base has {num_arcs} arcs",
                    pw.arc
                )));
            }
            if slots[pw.arc].is_some() {
                return Err(serde::de::Error::custom(format!(
                    "arc {} has more than one piece",
                    pw.arc
                )));
            }
            let piece = Piece::new(pw.graph, pw.t, pw.h).map_err(serde::de::Error::custom)?;
            slots[pw.arc] = Some(piece);
        }
        let pieces: Vec<Piece> = slots
            .into_iter()
            .enumerate()
            .map(|(k, s)| {
                s.ok_or_else(|| serde::de::Error::custom(format!("arc {k} has no piece")))
            })
            .collect::<std::result::Result<_, _>>()?;
        ThickenedSpec::new(wire.base, pieces).map_err(serde::de::Error::custom)
    }
}

/// Result of gluing the pieces onto the base.
#[derive(Debug, Clone)]
pub struct BuiltThickening {
    pub graph: Graph,
    /// Embedding of each piece into `graph`, indexed by arc.
    pub piece_maps: Vec<VertexMap>,
    /// For each edge index of `graph`, the sorted arcs whose pieces produce
    /// that edge (parallel single-edge pieces may share one).
    pub edge_arcs: Vec<Vec<usize>>,
    /// Whether every triangle of `graph` lies inside a single embedded piece.
    pub valid: bool,
}

/// Glues each piece along its arc: T to the tail, H to the head, the rest on
/// fresh vertices appended in arc order. Base vertices keep their indices.
pub fn build_thickened(spec: &ThickenedSpec) -> Result<BuiltThickening> {
    spec.validate()?;
    let base_n = spec.base.num_vertices();
    let mut next = base_n;
    let mut maps: Vec<Vec<usize>> = Vec::with_capacity(spec.pieces.len());
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (k, piece) in spec.pieces.iter().enumerate() {
        let (tail, head) = spec.base.arcs()[k];
        let mut map = Vec::with_capacity(piece.graph.num_vertices());
        for v in 0..piece.graph.num_vertices() {
            if v == piece.t {
                map.push(tail);
            } else if v == piece.h {
                map.push(head);
            } else {
                map.push(next);
                next += 1;
            }
        }
        for &(u, v) in piece.graph.edges() {
            edges.push((map[u].min(map[v]), map[u].max(map[v])));
        }
        maps.push(map);
    }
    let graph = Graph::new(next, &edges)?;
    let piece_maps: Vec<VertexMap> = spec
        .pieces
        .iter()
        .zip(maps)
        .map(|(piece, map)| VertexMap::new(piece.graph.clone(), graph.clone(), map))
        .collect::<Result<_>>()?;
    let edge_arcs = tag_edges(&graph, &piece_maps);
    let valid = triangles_covered(&graph, &piece_maps);
    Ok(BuiltThickening {
        graph,
        piece_maps,
        edge_arcs,
        valid,
    })
}

fn tag_edges(graph: &Graph, piece_maps: &[VertexMap]) -> Vec<Vec<usize>> {
    let mut tags = vec![Vec::new(); graph.num_edges()];
    for (k, emb) in piece_maps.iter().enumerate() {
        for &(u, v) in emb.domain.edges() {
            let idx = graph.edge_index(emb.apply(u), emb.apply(v)).unwrap();
            if !tags[idx].contains(&k) {
                tags[idx].push(k);
            }
        }
    }
    tags
}

/// Checks that every triangle (vertices and all three edges) lies inside a
/// single embedded piece.
fn triangles_covered(graph: &Graph, piece_maps: &[VertexMap]) -> bool {
    let embedded: Vec<std::collections::HashSet<(usize, usize)>> = piece_maps
        .iter()
        .map(|emb| {
            emb.domain
                .edges()
                .iter()
                .map(|&(u, v)| {
                    let (a, b) = (emb.apply(u), emb.apply(v));
                    (a.min(b), a.max(b))
                })
                .collect()
        })
        .collect();
    graph.triangles().iter().all(|&[a, b, c]| {
        embedded
            .iter()
            .any(|es| es.contains(&(a, b)) && es.contains(&(a, c)) && es.contains(&(b, c)))
    })
}

/// Finds an edge of the embedded piece lying in no induced 4-cycle of the
/// ambient graph and on no shortest T-H path of the piece, lexicographically
/// first in piece coordinates. Returns `None` exactly when every piece edge
/// lies on a shortest T-H path, which for chordal pieces means the piece is
/// that path.
pub fn find_special_edge(
    piece: &Graph,
    t: usize,
    h: usize,
    ambient: &Graph,
    embedding: &VertexMap,
) -> Result<Option<(usize, usize)>> {
    if embedding.domain != *piece || embedding.codomain != *ambient {
        return Err(Error::InvalidVertexMap(
            "embedding domain/codomain do not match piece and ambient".into(),
        ));
    }
    if !embedding.collapsed_edges().is_empty() {
        return Err(Error::InvalidVertexMap(
            "embedding collapses an edge".into(),
        ));
    }
    let mut seen = std::collections::HashSet::new();
    for v in 0..piece.num_vertices() {
        if !seen.insert(embedding.apply(v)) {
            return Err(Error::InvalidVertexMap("embedding is not injective".into()));
        }
    }
    piece.check_vertex(t)?;
    piece.check_vertex(h)?;
    let dist_t = piece.distances_from(t);
    let dist_h = piece.distances_from(h);
    let d = dist_t[h];
    if d == usize::MAX {
        return Err(Error::InvalidThickening(
            "marked vertices are disconnected".into(),
        ));
    }
    let on_shortest = |x: usize, y: usize| {
        dist_t[x].saturating_add(1).saturating_add(dist_h[y]) == d
            || dist_t[y].saturating_add(1).saturating_add(dist_h[x]) == d
    };
    let mut had_off_path = false;
    for &(x, y) in piece.edges() {
        if on_shortest(x, y) {
            continue;
        }
        had_off_path = true;
        let (a, b) = (embedding.apply(x), embedding.apply(y));
        if !in_induced_four_cycle(ambient, a, b) {
            return Ok(Some((x, y)));
        }
    }
    if had_off_path {
        // valid thickenings always leave some off-path edge outside every
        // induced ambient 4-cycle, so this state is unreachable from one
        return Err(Error::InvalidThickening(
            "off-path edges exist but none qualifies; ambient is not a valid thickening".into(),
        ));
    }
    Ok(None)
}

/// Whether edge {a, b} lies in some induced 4-cycle a-x-y-b-a.
fn in_induced_four_cycle(g: &Graph, a: usize, b: usize) -> bool {
    for &x in g.neighbors(a) {
        if x == b || g.has_edge(x, b) {
            continue;
        }
        for &y in g.neighbors(b) {
            if y == a || y == x || g.has_edge(y, a) {
                continue;
            }
            if g.has_edge(x, y) {
                return true;
            }
        }
    }
    false
}

/// One piece of the evolving state during reduction.
#[derive(Debug, Clone)]
pub struct ReducedPiece {
    pub graph: Graph,
    pub t: usize,
    pub h: usize,
    pub embedding: VertexMap,
}

/// Outcome of reducing a thickening to path pieces.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// The glued graph before any contraction.
    pub initial: Graph,
    /// The reduced graph: base with every arc replaced by a shortest path.
    pub graph: Graph,
    /// Ambient edges contracted, in order, each in the coordinates of the
    /// graph at the time of its contraction.
    pub log: Vec<(usize, usize)>,
    /// Composition of all contraction maps: `initial` onto `graph`.
    pub map: VertexMap,
    /// Final (path) pieces with their embeddings into `graph`, per arc.
    pub pieces: Vec<ReducedPiece>,
}

/// Repeatedly contracts special edges until every piece is a shortest marked
/// path. Errors when the spec is malformed or the triangle-coverage condition
/// fails (initially or, defensively, at any step).
pub fn reduce_thickened(spec: &ThickenedSpec) -> Result<Reduction> {
    let built = build_thickened(spec)?;
    if !built.valid {
        return Err(Error::InvalidThickening(
            "a triangle of the glued graph lies in no single piece".into(),
        ));
    }
    let initial = built.graph.clone();
    let mut ambient = built.graph.clone();
    let mut pieces: Vec<ReducedPiece> = spec
        .pieces
        .iter()
        .zip(&built.piece_maps)
        .map(|(p, emb)| ReducedPiece {
            graph: p.graph.clone(),
            t: p.t,
            h: p.h,
            embedding: emb.clone(),
        })
        .collect();
    let mut log: Vec<(usize, usize)> = Vec::new();
    let mut total = VertexMap::identity(&ambient);

    'outer: loop {
        for k in 0..pieces.len() {
            let piece = &pieces[k];
            let special =
                find_special_edge(&piece.graph, piece.t, piece.h, &ambient, &piece.embedding)?;
            let Some((x, y)) = special else { continue };
            let (a, b) = (piece.embedding.apply(x), piece.embedding.apply(y));
            let (next_ambient, cmap) = ambient.contract_edge(a, b)?;
            log.push((a, b));
            for (j, p) in pieces.iter_mut().enumerate() {
                if j == k {
                    let (pg, pmap) = p.graph.contract_edge(x, y)?;
                    debug_assert!(is_chordal(&pg));
                    let mut emb = vec![usize::MAX; pg.num_vertices()];
                    for v in 0..p.graph.num_vertices() {
                        emb[pmap.apply(v)] = cmap.apply(p.embedding.apply(v));
                    }
                    let embedding = VertexMap::new(pg.clone(), next_ambient.clone(), emb)?;
                    p.graph = pg;
                    p.t = pmap.apply(p.t);
                    p.h = pmap.apply(p.h);
                    p.embedding = embedding;
                } else {
                    p.embedding = p.embedding.then(&cmap)?;
                }
            }
            let maps: Vec<VertexMap> = pieces.iter().map(|p| p.embedding.clone()).collect();
            if !triangles_covered(&next_ambient, &maps) {
                return Err(Error::InvalidThickening(
                    "triangle coverage broke during reduction".into(),
                ));
            }
            total = total.then(&cmap)?;
            ambient = next_ambient;
            continue 'outer;
        }
        break;
    }

    Ok(Reduction {
        initial,
        graph: ambient,
        log,
        map: total,
        pieces,
    })
}

/// Replays a contraction log from a starting graph, returning the final graph
/// and the composed map. `reduce_thickened` output satisfies
/// `replay_log(&r.initial, &r.log) == (r.graph, r.map)`.
pub fn replay_log(initial: &Graph, log: &[(usize, usize)]) -> Result<(Graph, VertexMap)> {
    let mut g = initial.clone();
    let mut total = VertexMap::identity(&g);
    for &(a, b) in log {
        let (next, cmap) = g.contract_edge(a, b)?;
        total = total.then(&cmap)?;
        g = next;
    }
    Ok((g, total))
}
