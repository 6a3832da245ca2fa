//! GF(2) cohomology of the clique complex in degree 1.
//!
//! A cochain assigns a bit to every edge. Cocycles sum to zero around every
//! triangle; coboundaries are differences of a vertex potential. The quotient
//! classifies the sign patterns that matter for positive-semidefinite
//! completion: two patterns related by a diagonal sign flip differ by a
//! coboundary. Only vertices, edges, and triangles of the complex are ever
//! materialized — degree 1 needs nothing higher.

use crate::graph::{Graph, VertexMap};
use crate::thicken::{reduce_thickened, ThickenedSpec};
use crate::{Error, Result};

/// One bit per edge of a fixed graph, indexed by the graph's sorted edge
/// order. The graph itself is passed to the operations that need it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    len: usize,
    blocks: Vec<u64>,
}

impl Cochain {
    pub fn zero(num_edges: usize) -> Cochain {
        Cochain {
            len: num_edges,
            blocks: vec![0; num_edges.div_ceil(64)],
        }
    }

    /// Cochain on `g` with value 1 exactly on the listed edges.
    pub fn from_ones(g: &Graph, ones: &[(usize, usize)]) -> Result<Cochain> {
        let mut c = Cochain::zero(g.num_edges());
        for &(i, j) in ones {
            let e = g
                .edge_index(i, j)
                .ok_or_else(|| Error::InvalidCochain(format!("{{{i}, {j}}} is not an edge")))?;
            if c.get(e) {
                return Err(Error::InvalidCochain(format!(
                    "edge {{{i}, {j}}} listed twice"
                )));
            }
            c.set(e, true);
        }
        Ok(c)
    }

    /// Number of edges of the underlying graph (not the number of ones).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, e: usize) -> bool {
        debug_assert!(e < self.len);
        self.blocks[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn set(&mut self, e: usize, bit: bool) {
        debug_assert!(e < self.len);
        if bit {
            self.blocks[e / 64] |= 1 << (e % 64);
        } else {
            self.blocks[e / 64] &= !(1 << (e % 64));
        }
    }

    pub fn xor_assign(&mut self, other: &Cochain) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Index of the lowest edge carrying a 1.
    pub fn lowest_one(&self) -> Option<usize> {
        for (k, &b) in self.blocks.iter().enumerate() {
            if b != 0 {
                return Some(k * 64 + b.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Edges of `g` carrying a 1, in sorted edge order.
    pub fn ones_edges(&self, g: &Graph) -> Vec<(usize, usize)> {
        assert_eq!(
            self.len,
            g.num_edges(),
            "cochain length does not match graph"
        );
        g.edges()
            .iter()
            .enumerate()
            .filter(|&(e, _)| self.get(e))
            .map(|(_, &uv)| uv)
            .collect()
    }
}

/// True iff `f` sums to 0 over every triangle of `g`.
pub fn is_cocycle(g: &Graph, f: &Cochain) -> bool {
    assert_eq!(
        f.len(),
        g.num_edges(),
        "cochain length does not match graph"
    );
    g.triangles().iter().all(|&[a, b, c]| {
        let e1 = g.edge_index(a, b).unwrap();
        let e2 = g.edge_index(a, c).unwrap();
        let e3 = g.edge_index(b, c).unwrap();
        !(f.get(e1) ^ f.get(e2) ^ f.get(e3))
    })
}

/// Vertex potential `d` with `f({i, j}) = d(i) + d(j)` over GF(2), if one
/// exists. Each component's potential is normalized to 0 at its lowest
/// vertex, so the result is deterministic.
pub fn coboundary_potential(g: &Graph, f: &Cochain) -> Option<Vec<bool>> {
    assert_eq!(
        f.len(),
        g.num_edges(),
        "cochain length does not match graph"
    );
    let n = g.num_vertices();
    let mut d = vec![false; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                let bit = f.get(g.edge_index(u, v).unwrap());
                if !seen[v] {
                    seen[v] = true;
                    d[v] = d[u] ^ bit;
                    queue.push_back(v);
                } else if d[u] ^ d[v] != bit {
                    return None;
                }
            }
        }
    }
    Some(d)
}

/// Coboundary of a vertex potential: `(δd)({i, j}) = d(i) + d(j)`.
pub fn coboundary(g: &Graph, d: &[bool]) -> Cochain {
    assert_eq!(d.len(), g.num_vertices());
    let mut c = Cochain::zero(g.num_edges());
    for (e, &(i, j)) in g.edges().iter().enumerate() {
        c.set(e, d[i] ^ d[j]);
    }
    c
}

/// Canonical representatives of every edge-sign class modulo vertex sign
/// flips: the cochains vanishing on the pivot edges of the coboundary
/// space. Exactly one per coset, 2^(E − V + c) in total; errors when the
/// coset count exceeds 2^max_dim.
pub fn sign_class_reps(g: &Graph, max_dim: usize) -> Result<Vec<Cochain>> {
    let m = g.num_edges();
    let mut elim = Eliminator::new();
    for v in 0..g.num_vertices() {
        let mut ind = vec![false; g.num_vertices()];
        ind[v] = true;
        elim.insert(coboundary(g, &ind), 0);
    }
    let mut is_pivot = vec![false; m];
    for (p, _, _) in &elim.rows {
        is_pivot[*p] = true;
    }
    let free: Vec<usize> = (0..m).filter(|&e| !is_pivot[e]).collect();
    if free.len() > max_dim {
        return Err(Error::CapExceeded(format!(
            "2^{} sign classes exceeds the 2^{max_dim} enumeration cap",
            free.len()
        )));
    }
    let mut out = Vec::with_capacity(1usize << free.len());
    for mask in 0..(1u64 << free.len()) {
        let mut c = Cochain::zero(m);
        for (b, &e) in free.iter().enumerate() {
            if mask >> b & 1 == 1 {
                c.set(e, true);
            }
        }
        out.push(c);
    }
    Ok(out)
}

/// GF(2) row eliminator over edge-indexed bit vectors. Rows are kept in
/// reduced echelon form (every row zero at every other row's pivot), pivoting
/// on the lowest set bit, so insertion order determines the basis
/// deterministically. Each row carries an auxiliary word tracking, over
/// GF(2), which tagged insertions it is composed of.
struct Eliminator {
    /// (pivot edge index, reduced row, composition word), sorted by pivot.
    rows: Vec<(usize, Cochain, u64)>,
}

impl Eliminator {
    fn new() -> Eliminator {
        Eliminator { rows: Vec::new() }
    }

    /// Reduce `v` against the current rows; returns the accumulated
    /// composition word of the rows used.
    fn reduce(&self, v: &mut Cochain) -> u64 {
        let mut acc = 0;
        for (p, row, tag) in &self.rows {
            if v.get(*p) {
                v.xor_assign(row);
                acc ^= tag;
            }
        }
        acc
    }

    /// Reduce and, if a remainder survives, absorb it. Returns true when the
    /// vector increased the rank. Existing rows are back-substituted so the
    /// basis stays fully reduced.
    fn insert(&mut self, mut v: Cochain, mut tag: u64) -> bool {
        tag ^= self.reduce(&mut v);
        let Some(p) = v.lowest_one() else {
            return false;
        };
        for (_, row, rtag) in self.rows.iter_mut() {
            if row.get(p) {
                row.xor_assign(&v);
                *rtag ^= tag;
            }
        }
        let at = self.rows.partition_point(|(q, _, _)| *q < p);
        self.rows.insert(at, (p, v, tag));
        true
    }
}

/// Bases of the degree-1 cocycle and coboundary spaces of the clique complex
/// of `graph`, with chosen representatives for the quotient.
#[derive(Debug, Clone)]
pub struct CohomologyBasis {
    pub graph: Graph,
    pub cocycle_basis: Vec<Cochain>,
    pub coboundary_basis: Vec<Cochain>,
    pub quotient_reps: Vec<Cochain>,
    /// Rank of cocycles minus rank of coboundaries.
    pub dimension: usize,
}

/// Classification of a single cochain relative to a [`CohomologyBasis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainClass {
    pub is_cocycle: bool,
    pub is_coboundary: bool,
    /// Coordinates of the class over `quotient_reps`; `None` when the cochain
    /// is not a cocycle. The all-false vector is the trivial class.
    pub class_coordinates: Option<Vec<bool>>,
}

impl CochainClass {
    /// True for cocycles that are not coboundaries.
    pub fn is_nontrivial(&self) -> bool {
        self.is_cocycle && !self.is_coboundary
    }
}

/// Kernel of the triangle-sum map as a reduced echelon basis, ordered by free
/// edge index.
fn cocycle_kernel_basis(g: &Graph) -> Vec<Cochain> {
    let m = g.num_edges();
    let mut elim = Eliminator::new();
    for &[a, b, c] in &g.triangles() {
        let mut row = Cochain::zero(m);
        row.set(g.edge_index(a, b).unwrap(), true);
        row.set(g.edge_index(a, c).unwrap(), true);
        row.set(g.edge_index(b, c).unwrap(), true);
        elim.insert(row, 0);
    }
    let pivot_rows = &elim.rows;
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; m];
        for (p, _, _) in pivot_rows {
            v[*p] = true;
        }
        v
    };
    let mut basis = Vec::with_capacity(m - pivot_rows.len());
    for free in (0..m).filter(|&e| !is_pivot[e]) {
        let mut v = Cochain::zero(m);
        v.set(free, true);
        // pivot coordinate of the kernel vector equals the free-column entry
        // of the reduced row
        for (p, row, _) in pivot_rows {
            if row.get(free) {
                v.set(*p, true);
            }
        }
        basis.push(v);
    }
    basis
}

/// Compute cocycle, coboundary, and quotient bases for `g` by GF(2)
/// elimination with lowest-index pivoting throughout.
pub fn h1_basis(g: &Graph) -> CohomologyBasis {
    let cocycle_basis = cocycle_kernel_basis(g);
    let mut elim = Eliminator::new();
    let mut coboundary_basis = Vec::new();
    for v in 0..g.num_vertices() {
        let mut d = vec![false; g.num_vertices()];
        d[v] = true;
        let row = coboundary(g, &d);
        if elim.insert(row.clone(), 0) {
            coboundary_basis.push(row);
        }
    }
    let mut quotient_reps = Vec::new();
    for z in &cocycle_basis {
        if elim.insert(z.clone(), 0) {
            quotient_reps.push(z.clone());
        }
    }
    let dimension = quotient_reps.len();
    CohomologyBasis {
        graph: g.clone(),
        cocycle_basis,
        coboundary_basis,
        quotient_reps,
        dimension,
    }
}

impl CohomologyBasis {
    /// Classify `f`: cocycle/coboundary flags plus, for cocycles, the GF(2)
    /// coordinates of its class over `quotient_reps`.
    pub fn classify(&self, f: &Cochain) -> CochainClass {
        assert_eq!(
            f.len(),
            self.graph.num_edges(),
            "cochain length does not match graph"
        );
        let cocycle = is_cocycle(&self.graph, f);
        let coboundary = coboundary_potential(&self.graph, f).is_some();
        let coords = if cocycle {
            Some(self.class_coordinates(f))
        } else {
            None
        };
        CochainClass {
            is_cocycle: cocycle,
            is_coboundary: coboundary,
            class_coordinates: coords,
        }
    }

    /// Coordinates of a cocycle's class over `quotient_reps`: the unique
    /// GF(2) vector c with f + Σ c_j · rep_j a coboundary.
    fn class_coordinates(&self, f: &Cochain) -> Vec<bool> {
        let k = self.quotient_reps.len();
        assert!(k <= 64, "more than 64 quotient classes");
        let mut elim = Eliminator::new();
        for b in &self.coboundary_basis {
            elim.insert(b.clone(), 0);
        }
        for (j, q) in self.quotient_reps.iter().enumerate() {
            let fresh = elim.insert(q.clone(), 1 << j);
            debug_assert!(fresh, "quotient rep dependent on earlier rows");
        }
        // coboundaries and reps together span the cocycle space, so a cocycle
        // reduces to zero; the composition word is exactly the rep content
        let mut r = f.clone();
        let acc = elim.reduce(&mut r);
        debug_assert!(r.is_zero(), "cocycle outside the span of the basis");
        (0..k).map(|j| acc >> j & 1 == 1).collect()
    }
}

/// Pull a cochain on the codomain of `φ` back to its domain:
/// `φ*(f)({i, j}) = f({φ(i), φ(j)})`, with collapsed edges mapped to 0.
pub fn pullback(phi: &VertexMap, f: &Cochain) -> Cochain {
    assert_eq!(
        f.len(),
        phi.codomain.num_edges(),
        "cochain length does not match codomain"
    );
    let mut out = Cochain::zero(phi.domain.num_edges());
    for (e, &(i, j)) in phi.domain.edges().iter().enumerate() {
        let (fi, fj) = (phi.apply(i), phi.apply(j));
        if fi != fj {
            let ce = phi
                .codomain
                .edge_index(fi, fj)
                .expect("vertex map sends edges to edges");
            out.set(e, f.get(ce));
        }
    }
    out
}

/// GF(2) rank of a list of coordinate vectors (each over at most 64 basis
/// classes).
fn rank_u64(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for i in 0..64 {
        let bit = 1u64 << i;
        if let Some(k) = (rank..rows.len()).find(|&k| rows[k] & bit != 0) {
            rows.swap(rank, k);
            let pivot = rows[rank];
            for (j, row) in rows.iter_mut().enumerate() {
                if j != rank && *row & bit != 0 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
    }
    rank
}

fn coords_to_u64(coords: &[bool]) -> u64 {
    assert!(coords.len() <= 64, "more than 64 quotient classes");
    coords
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
}

/// True iff the pullbacks of the codomain's quotient representatives span
/// the domain's degree-1 cohomology.
pub fn is_surjective_degree1(phi: &VertexMap) -> bool {
    let dom = h1_basis(&phi.domain);
    if dom.dimension == 0 {
        return true;
    }
    let cod = h1_basis(&phi.codomain);
    let rows: Vec<u64> = cod
        .quotient_reps
        .iter()
        .map(|r| {
            let p = pullback(phi, r);
            debug_assert!(
                is_cocycle(&phi.domain, &p),
                "pullback of a cocycle is a cocycle"
            );
            coords_to_u64(&dom.class_coordinates(&p))
        })
        .collect();
    rank_u64(rows) == dom.dimension
}

/// Strategy for establishing surjectivity on every induced restriction.
pub enum SurjectivityMode<'a> {
    /// Check `is_surjective_degree1` on every vertex subset of the domain;
    /// refuses domains larger than `cap` vertices.
    Exhaustive { cap: usize },
    /// Accept a map produced by [`reduce_thickened`] on a valid thickening:
    /// each logged contraction is of an edge outside every induced 4-cycle,
    /// and such contractions compose to a completely surjective map.
    Structural { spec: &'a ThickenedSpec },
}

pub const EXHAUSTIVE_SURJECTIVITY_CAP: usize = 16;

/// Outcome of a complete-surjectivity check, with a human-readable
/// description of what was verified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurjectivityReport {
    pub result: bool,
    pub certificate: String,
}

/// Decide whether `φ` induces a surjection on degree-1 cohomology for every
/// induced subgraph of its domain.
pub fn is_completely_surjective(
    phi: &VertexMap,
    mode: SurjectivityMode,
) -> Result<SurjectivityReport> {
    match mode {
        SurjectivityMode::Exhaustive { cap } => {
            let n = phi.domain.num_vertices();
            if n > cap {
                return Err(Error::CapExceeded(format!(
                    "exhaustive surjectivity on {n} vertices exceeds cap {cap}"
                )));
            }
            let mut checked = 0usize;
            for mask in 0..(1u32 << n) {
                let subset: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                // degree-1 cohomology needs at least a 4-cycle
                if subset.len() < 4 {
                    continue;
                }
                checked += 1;
                let restricted = phi.restrict(&subset)?;
                if !is_surjective_degree1(&restricted) {
                    return Ok(SurjectivityReport {
                        result: false,
                        certificate: format!(
                            "restriction to {subset:?} is not surjective in degree 1"
                        ),
                    });
                }
            }
            Ok(SurjectivityReport {
                result: true,
                certificate: format!(
                    "all {checked} induced restrictions on ≥ 4 vertices surjective in degree 1"
                ),
            })
        }
        SurjectivityMode::Structural { spec } => {
            let reduction = reduce_thickened(spec).map_err(|e| {
                Error::SurjectivityUnverified(format!("thickening does not reduce: {e}"))
            })?;
            if phi.domain != reduction.initial
                || phi.codomain != reduction.graph
                || phi.map() != reduction.map.map()
            {
                return Err(Error::SurjectivityUnverified(
                    "map does not match the thickening's contraction log".into(),
                ));
            }
            Ok(SurjectivityReport {
                result: true,
                certificate: format!(
                    "thickening reduction: {} contractions of edges outside induced 4-cycles",
                    reduction.log.len()
                ),
            })
        }
    }
}
