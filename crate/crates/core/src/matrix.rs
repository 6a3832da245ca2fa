//! Partial symmetric matrices over a graph's sparsity pattern.
//!
//! A partial matrix specifies the diagonal and one value per edge; all other
//! entries are unknown. Membership tests work clique-by-clique: locally PSD
//! means every maximal-clique principal submatrix is PSD, the weaker
//! edge-block variant checks only 2×2 blocks, and local rank 1 bounds the
//! second singular value of every clique block. Locally-rank-1 matrices carry
//! a GF(2) sign pattern on their support; that pattern is a cocycle, is
//! shifted by a coboundary under diagonal congruence, and parameterizes the
//! candidate extreme rays of the locally-PSD cone.

use crate::cohomology::{h1_basis, is_cocycle, Cochain};
use crate::graph::{Graph, VertexMap};
use crate::linalg::{sym_eigen, SymMatrix};
use crate::{Error, Result};

/// Symmetric matrix known only on the diagonal and the edges of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialMatrix {
    graph: Graph,
    diagonal: Vec<f64>,
    /// Edge values, parallel to the graph's sorted edge list.
    offdiag: Vec<f64>,
}

impl PartialMatrix {
    pub fn new(graph: Graph, diagonal: Vec<f64>, offdiag: Vec<f64>) -> Result<PartialMatrix> {
        if diagonal.len() != graph.num_vertices() {
            return Err(Error::InvalidMatrix(format!(
                "diagonal length {} for {} vertices",
                diagonal.len(),
                graph.num_vertices()
            )));
        }
        if offdiag.len() != graph.num_edges() {
            return Err(Error::InvalidMatrix(format!(
                "{} edge values for {} edges",
                offdiag.len(),
                graph.num_edges()
            )));
        }
        if diagonal.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(PartialMatrix {
            graph,
            diagonal,
            offdiag,
        })
    }

    pub fn zero(graph: Graph) -> PartialMatrix {
        let n = graph.num_vertices();
        let m = graph.num_edges();
        PartialMatrix {
            graph,
            diagonal: vec![0.0; n],
            offdiag: vec![0.0; m],
        }
    }

    /// Projection of the identity: unit diagonal, zero on every edge.
    pub fn identity(graph: Graph) -> PartialMatrix {
        let n = graph.num_vertices();
        let m = graph.num_edges();
        PartialMatrix {
            graph,
            diagonal: vec![1.0; n],
            offdiag: vec![0.0; m],
        }
    }

    /// Projection of a full symmetric matrix onto the graph's pattern:
    /// entries on non-edges are forgotten.
    pub fn project(graph: Graph, full: &SymMatrix) -> Result<PartialMatrix> {
        if full.n != graph.num_vertices() {
            return Err(Error::InvalidMatrix(format!(
                "{}×{0} matrix over {} vertices",
                full.n,
                graph.num_vertices()
            )));
        }
        let diagonal = (0..graph.num_vertices()).map(|i| full.get(i, i)).collect();
        let offdiag = graph.edges().iter().map(|&(i, j)| full.get(i, j)).collect();
        PartialMatrix::new(graph, diagonal, offdiag)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.diagonal[i]
    }

    /// Value on an edge; `None` for non-edges.
    pub fn edge_value(&self, i: usize, j: usize) -> Option<f64> {
        self.graph.edge_index(i, j).map(|e| self.offdiag[e])
    }

    pub fn set_diag(&mut self, i: usize, v: f64) {
        self.diagonal[i] = v;
    }

    pub fn set_edge(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        let e = self
            .graph
            .edge_index(i, j)
            .ok_or_else(|| Error::NotAnEdge(format!("{{{i}, {j}}}")))?;
        self.offdiag[e] = v;
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        self.diagonal.iter().sum()
    }

    /// Vertices with strictly positive diagonal.
    pub fn support(&self) -> Vec<usize> {
        (0..self.graph.num_vertices())
            .filter(|&i| self.diagonal[i] > 0.0)
            .collect()
    }

    /// The same pattern with `t` added to every diagonal entry (X + t·I_G).
    pub fn shifted(&self, t: f64) -> PartialMatrix {
        let mut out = self.clone();
        for d in &mut out.diagonal {
            *d += t;
        }
        out
    }

    pub fn scaled(&self, c: f64) -> PartialMatrix {
        let mut out = self.clone();
        for d in &mut out.diagonal {
            *d *= c;
        }
        for v in &mut out.offdiag {
            *v *= c;
        }
        out
    }

    /// Restriction to the induced subgraph on `s` (sorted, deduplicated).
    pub fn restrict(&self, s: &[usize]) -> Result<PartialMatrix> {
        let (sub, old) = self.graph.induced_subgraph(s)?;
        let diagonal = old.iter().map(|&v| self.diagonal[v]).collect();
        let offdiag = sub
            .edges()
            .iter()
            .map(|&(a, b)| self.edge_value(old[a], old[b]).expect("induced edge"))
            .collect();
        PartialMatrix::new(sub, diagonal, offdiag)
    }

    /// Dense completion with every unknown entry set to zero.
    pub fn zero_completion(&self) -> SymMatrix {
        let n = self.graph.num_vertices();
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, self.diagonal[i]);
        }
        for (e, &(i, j)) in self.graph.edges().iter().enumerate() {
            m.set(i, j, self.offdiag[e]);
        }
        m
    }

    /// Fully specified principal submatrix over a clique (sorted vertices).
    /// Panics if the vertices do not form a clique.
    pub fn clique_block(&self, clique: &[usize]) -> SymMatrix {
        let k = clique.len();
        let mut m = SymMatrix::zeros(k);
        for a in 0..k {
            m.set(a, a, self.diagonal[clique[a]]);
            for b in (a + 1)..k {
                let v = self
                    .edge_value(clique[a], clique[b])
                    .expect("clique vertices must be pairwise adjacent");
                m.set(a, b, v);
            }
        }
        m
    }
}

/// Membership flags of a partial matrix relative to the clique structure.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    /// Every maximal-clique block PSD (within tolerance).
    pub locally_psd: bool,
    /// Every vertex and edge block PSD (within tolerance); implied by
    /// `locally_psd`.
    pub pos_minus: bool,
    /// Every maximal-clique block has rank ≤ 1 (relative tolerance).
    pub locally_rank1: bool,
    /// Vertices with strictly positive diagonal.
    pub support: Vec<usize>,
    /// Maximal clique attaining the smallest block eigenvalue.
    pub worst_clique: Vec<usize>,
    pub worst_lambda_min: f64,
}

/// Classify a partial matrix by examining every maximal-clique block.
pub fn classify_matrix(x: &PartialMatrix, tol: f64) -> ClassificationReport {
    let g = x.graph();
    let mut worst_clique = Vec::new();
    let mut worst_lambda_min = f64::INFINITY;
    let mut locally_rank1 = true;
    for clique in g.maximal_cliques() {
        let eig = sym_eigen(&x.clique_block(&clique));
        let lambda_min = eig.lambda_min();
        if lambda_min < worst_lambda_min {
            worst_lambda_min = lambda_min;
            worst_clique = clique.clone();
        }
        let mut mags: Vec<f64> = eig.values.iter().map(|v| v.abs()).collect();
        mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let s1 = mags.first().copied().unwrap_or(0.0);
        let s2 = mags.get(1).copied().unwrap_or(0.0);
        if s2 > if s1 <= tol { tol } else { tol * s1 } {
            locally_rank1 = false;
        }
    }
    if !worst_lambda_min.is_finite() {
        // vertex-free graph: no blocks at all
        worst_lambda_min = 0.0;
    }
    let locally_psd = worst_lambda_min >= -tol;
    let pos_minus = x.diagonal().iter().all(|&d| d >= -tol)
        && g.edges().iter().enumerate().all(|(e, &(i, j))| {
            let (a, b, c) = (x.diag(i), x.diag(j), x.offdiag()[e]);
            // λ_min of [[a, c], [c, b]]
            (a + b) / 2.0 - ((a - b).powi(2) / 4.0 + c * c).sqrt() >= -tol
        });
    ClassificationReport {
        locally_psd,
        pos_minus,
        locally_rank1,
        support: x.support(),
        worst_clique,
        worst_lambda_min,
    }
}

/// Sign pattern of a locally-rank-1 matrix: one bit per edge of the
/// support-induced subgraph, set exactly on negative entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SignPattern {
    pub support: Vec<usize>,
    /// Induced subgraph on the support (densely relabeled).
    pub subgraph: Graph,
    pub cochain: Cochain,
}

/// Extract the sign pattern; rejects matrices that are not locally rank 1
/// within `tol`.
pub fn sign_pattern(x: &PartialMatrix, tol: f64) -> Result<SignPattern> {
    let report = classify_matrix(x, tol);
    if !report.locally_rank1 {
        return Err(Error::InvalidMatrix(
            "sign pattern requires a locally rank-1 matrix".into(),
        ));
    }
    let support = report.support;
    let (subgraph, old) = x.graph().induced_subgraph(&support)?;
    let mut cochain = Cochain::zero(subgraph.num_edges());
    for (e, &(a, b)) in subgraph.edges().iter().enumerate() {
        let v = x.edge_value(old[a], old[b]).expect("induced edge");
        cochain.set(e, v < 0.0);
    }
    Ok(SignPattern {
        support,
        subgraph,
        cochain,
    })
}

/// Congruence by a diagonal matrix: entry {i, j} picks up d_i · d_j.
pub fn diagonal_congruence(x: &PartialMatrix, d: &[f64]) -> PartialMatrix {
    assert_eq!(
        d.len(),
        x.graph().num_vertices(),
        "diagonal length mismatch"
    );
    let diagonal = x
        .diagonal()
        .iter()
        .zip(d)
        .map(|(v, di)| di * di * v)
        .collect();
    let offdiag = x
        .graph()
        .edges()
        .iter()
        .zip(x.offdiag())
        .map(|(&(i, j), v)| d[i] * d[j] * v)
        .collect();
    PartialMatrix::new(x.graph().clone(), diagonal, offdiag)
        .expect("congruence of a valid matrix is valid")
}

/// Build the locally-rank-1 matrix with the given support, sign class, and
/// diagonal: X_ij = (−1)^class · √(diag_i · diag_j) on support edges, zero
/// everywhere else. `diag` is parallel to `support` and strictly positive.
pub fn from_sign_pattern(
    g: &Graph,
    support: &[usize],
    class: &Cochain,
    diag: &[f64],
) -> Result<PartialMatrix> {
    build_signed_rank1(g, support, class, diag, true)
}

/// Same construction as [`from_sign_pattern`] but with arbitrary edge signs:
/// the class need not vanish on triangles, so every edge block is still PSD
/// while clique blocks may not be. Candidates for the edge-block relaxation
/// are built this way.
pub fn from_edge_signs(
    g: &Graph,
    support: &[usize],
    class: &Cochain,
    diag: &[f64],
) -> Result<PartialMatrix> {
    build_signed_rank1(g, support, class, diag, false)
}

fn build_signed_rank1(
    g: &Graph,
    support: &[usize],
    class: &Cochain,
    diag: &[f64],
    require_cocycle: bool,
) -> Result<PartialMatrix> {
    let (sub, old) = g.induced_subgraph(support)?;
    if diag.len() != old.len() {
        return Err(Error::InvalidMatrix(format!(
            "{} diagonal values for a support of {}",
            diag.len(),
            old.len()
        )));
    }
    if diag.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidMatrix(
            "support diagonal must be strictly positive".into(),
        ));
    }
    if class.len() != sub.num_edges() {
        return Err(Error::InvalidCochain(format!(
            "class over {} edges, support subgraph has {}",
            class.len(),
            sub.num_edges()
        )));
    }
    if require_cocycle && !is_cocycle(&sub, class) {
        return Err(Error::NotACocycle(
            "sign class must sum to zero on every support triangle".into(),
        ));
    }
    let mut x = PartialMatrix::zero(g.clone());
    for (a, &v) in old.iter().enumerate() {
        x.set_diag(v, diag[a]);
    }
    for (e, &(a, b)) in sub.edges().iter().enumerate() {
        let sign = if class.get(e) { -1.0 } else { 1.0 };
        x.set_edge(old[a], old[b], sign * (diag[a] * diag[b]).sqrt())?;
    }
    Ok(x)
}

/// How supports are chosen when enumerating candidate extreme-ray classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportMode {
    /// Only the full vertex set.
    FullOnly,
    /// Every nonempty vertex subset; limited to graphs of at most
    /// [`SUBSET_ENUMERATION_CAP`] vertices.
    AllSubsets,
}

pub const SUBSET_ENUMERATION_CAP: usize = 16;

/// Cap on the quotient dimension per support when enumerating all 2^dim
/// classes.
const CLASS_ENUMERATION_DIM_CAP: usize = 20;

/// One candidate extreme-ray class: a support together with coordinates in
/// the quotient basis of its induced subgraph, and the representative
/// cochain those coordinates select.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremeClass {
    pub support: Vec<usize>,
    pub coords: Vec<bool>,
    pub representative: Cochain,
}

/// Enumerate the locally-rank-1 candidate extreme-ray classes of the
/// locally-PSD cone: one entry per support per degree-1 quotient class
/// (including the trivial class). A superset of the true extreme rays except
/// on graphs of extreme local rank 1, where the correspondence is exact.
pub fn enumerate_extreme_classes(g: &Graph, mode: SupportMode) -> Result<Vec<ExtremeClass>> {
    let n = g.num_vertices();
    let supports: Vec<Vec<usize>> = match mode {
        SupportMode::FullOnly => vec![(0..n).collect()],
        SupportMode::AllSubsets => {
            if n > SUBSET_ENUMERATION_CAP {
                return Err(Error::CapExceeded(format!(
                    "subset enumeration on {n} vertices exceeds cap {SUBSET_ENUMERATION_CAP}"
                )));
            }
            (1..(1u32 << n))
                .map(|mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
                .collect()
        }
    };
    let mut classes = Vec::new();
    for support in supports {
        let (sub, _) = g.induced_subgraph(&support)?;
        let basis = h1_basis(&sub);
        if basis.dimension > CLASS_ENUMERATION_DIM_CAP {
            return Err(Error::CapExceeded(format!(
                "2^{} classes on one support",
                basis.dimension
            )));
        }
        for mask in 0..(1u32 << basis.dimension) {
            let coords: Vec<bool> = (0..basis.dimension).map(|j| mask >> j & 1 == 1).collect();
            let mut representative = Cochain::zero(sub.num_edges());
            for (j, rep) in basis.quotient_reps.iter().enumerate() {
                if coords[j] {
                    representative.xor_assign(rep);
                }
            }
            classes.push(ExtremeClass {
                support: support.clone(),
                coords,
                representative,
            });
        }
    }
    Ok(classes)
}

/// Pull a partial matrix on the codomain of `φ` back to its domain:
/// Y_ij = X_{φ(i)φ(j)}, with collapsed edges reading the codomain diagonal.
pub fn matrix_pullback(phi: &VertexMap, x: &PartialMatrix) -> PartialMatrix {
    assert_eq!(
        x.graph(),
        &phi.codomain,
        "matrix pattern does not match the map's codomain"
    );
    let diagonal = (0..phi.domain.num_vertices())
        .map(|i| x.diag(phi.apply(i)))
        .collect();
    let offdiag = phi
        .domain
        .edges()
        .iter()
        .map(|&(i, j)| {
            let (fi, fj) = (phi.apply(i), phi.apply(j));
            if fi == fj {
                x.diag(fi)
            } else {
                x.edge_value(fi, fj)
                    .expect("vertex map sends edges to edges")
            }
        })
        .collect();
    PartialMatrix::new(phi.domain.clone(), diagonal, offdiag)
        .expect("pullback of a valid matrix is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{coboundary_potential, CohomologyBasis};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    /// The extremal matrix on the 4-cycle: diagonal 1/4, edges +1/4 except
    /// one edge at −1/4.
    fn extremal_o4() -> PartialMatrix {
        let g = Graph::cycle(4);
        let mut x = PartialMatrix::identity(g.clone()).scaled(0.25);
        for &(i, j) in g.edges() {
            x.set_edge(i, j, 0.25).unwrap();
        }
        x.set_edge(0, 1, -0.25).unwrap();
        x
    }

    fn random_gram(n: usize, rank: usize, rng: &mut ChaCha8Rng) -> SymMatrix {
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..rank).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let dot = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
                m.set(i, j, dot);
            }
        }
        m
    }

    fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn projection_and_restriction() {
        // all-ones 3×3 projected onto the path a–b–c forgets the ac entry
        let path = Graph::path(3);
        let mut ones = SymMatrix::zeros(3);
        for i in 0..3 {
            for j in i..3 {
                ones.set(i, j, 1.0);
            }
        }
        let x = PartialMatrix::project(path, &ones).unwrap();
        assert_eq!(x.diagonal(), &[1.0, 1.0, 1.0]);
        assert_eq!(x.edge_value(0, 1), Some(1.0));
        assert_eq!(x.edge_value(1, 2), Some(1.0));
        assert_eq!(x.edge_value(0, 2), None);

        let id = PartialMatrix::identity(Graph::cycle(4));
        let pair = id.restrict(&[1, 2]).unwrap();
        assert_eq!(pair.diagonal(), &[1.0, 1.0]);
        assert_eq!(pair.edge_value(0, 1), Some(0.0));
        // restriction to everything is the identity operation
        assert_eq!(id.restrict(&[0, 1, 2, 3]).unwrap(), id);
    }

    #[test]
    fn classify_the_extremal_cycle_matrix() {
        let x = extremal_o4();
        let r = classify_matrix(&x, TOL);
        assert!(r.locally_psd);
        assert!(r.pos_minus);
        assert!(r.locally_rank1);
        assert_eq!(r.support, vec![0, 1, 2, 3]);
        // each edge block is (1/4)[[1, ±1], [±1, 1]]: eigenvalues {0, 1/2}
        assert!(r.worst_lambda_min.abs() < 1e-12);
    }

    #[test]
    fn classify_flags_indefinite_blocks() {
        let path = Graph::path(3);
        let x = PartialMatrix::new(path, vec![1.0, 1.0, 1.0], vec![2.0, 2.0]).unwrap();
        let r = classify_matrix(&x, TOL);
        assert!(!r.locally_psd);
        assert!(!r.pos_minus);
        assert!((r.worst_lambda_min - -1.0).abs() < 1e-12);
        assert_eq!(r.worst_clique.len(), 2);
    }

    #[test]
    fn classify_zero_matrix() {
        let x = PartialMatrix::zero(Graph::cycle(5));
        let r = classify_matrix(&x, TOL);
        assert!(r.locally_psd && r.pos_minus && r.locally_rank1);
        assert!(r.support.is_empty());
        assert_eq!(r.worst_lambda_min, 0.0);
    }

    #[test]
    fn sign_pattern_of_the_extremal_matrix() {
        let x = extremal_o4();
        let p = sign_pattern(&x, TOL).unwrap();
        assert_eq!(p.support, vec![0, 1, 2, 3]);
        assert_eq!(p.cochain.ones_edges(&p.subgraph), vec![(0, 1)]);
        let basis = h1_basis(&p.subgraph);
        let class = basis.classify(&p.cochain);
        assert!(class.is_nontrivial());
    }

    #[test]
    fn sign_pattern_of_rank_one_and_diag_only() {
        // projection of vvᵀ with v > 0: zero cochain
        let g = Graph::complete(4);
        let v = [1.0, 2.0, 0.5, 1.5];
        let mut full = SymMatrix::zeros(4);
        for i in 0..4 {
            for j in i..4 {
                full.set(i, j, v[i] * v[j]);
            }
        }
        let x = PartialMatrix::project(g.clone(), &full).unwrap();
        let p = sign_pattern(&x, TOL).unwrap();
        assert!(p.cochain.is_zero());

        // diagonal-only matrix with an independent support: zero cochain
        // (adjacent support vertices with a zero edge would break rank 1)
        let d =
            PartialMatrix::new(Graph::cycle(4), vec![1.0, 0.0, 2.0, 0.0], vec![0.0; 4]).unwrap();
        let p = sign_pattern(&d, TOL).unwrap();
        assert_eq!(p.support, vec![0, 2]);
        assert!(p.cochain.is_zero());
        assert_eq!(p.subgraph.num_edges(), 0);

        // an indefinite matrix has no meaningful pattern
        let path = Graph::path(3);
        let bad = PartialMatrix::new(path, vec![1.0, 1.0, 1.0], vec![0.5, 0.25]).unwrap();
        assert!(sign_pattern(&bad, TOL).is_err());
    }

    #[test]
    fn diagonal_congruence_formula() {
        let x = extremal_o4();
        assert_eq!(diagonal_congruence(&x, &[1.0; 4]), x);
        let y = diagonal_congruence(&x, &[2.0, 1.0, 1.0, 1.0]);
        assert_eq!(y.diag(0), 4.0 * 0.25);
        assert_eq!(y.edge_value(0, 1), Some(-0.5));
        assert_eq!(y.edge_value(0, 3), Some(0.5));
        assert_eq!(y.edge_value(1, 2), Some(0.25));
        // zero entry wipes a row and shrinks the support
        let z = diagonal_congruence(&x, &[0.0, 1.0, 1.0, 1.0]);
        assert_eq!(z.support(), vec![1, 2, 3]);
        assert_eq!(z.edge_value(0, 1), Some(0.0));
    }

    #[test]
    fn from_sign_pattern_reproduces_the_extremal_matrix() {
        let g = Graph::cycle(4);
        let class = Cochain::from_ones(&g, &[(0, 1)]).unwrap();
        let x = from_sign_pattern(&g, &[0, 1, 2, 3], &class, &[0.25; 4]).unwrap();
        assert_eq!(x, extremal_o4());
        let r = classify_matrix(&x, TOL);
        assert!(r.locally_psd && r.locally_rank1);

        // single-vertex support: diagonal only
        let solo = from_sign_pattern(&g, &[2], &Cochain::zero(0), &[3.0]).unwrap();
        assert_eq!(solo.diagonal(), &[0.0, 0.0, 3.0, 0.0]);

        // a non-cocycle class is rejected
        let k3 = Graph::complete(3);
        let bad = Cochain::from_ones(&k3, &[(0, 1)]).unwrap();
        assert!(matches!(
            from_sign_pattern(&k3, &[0, 1, 2], &bad, &[1.0; 3]),
            Err(Error::NotACocycle(_))
        ));
    }

    #[test]
    fn extreme_class_counts() {
        let classes = enumerate_extreme_classes(&Graph::cycle(4), SupportMode::FullOnly).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes[0].representative.is_zero());
        assert!(!classes[1].representative.is_zero());

        let k3 = enumerate_extreme_classes(&Graph::complete(3), SupportMode::FullOnly).unwrap();
        assert_eq!(k3.len(), 1);

        let pet = enumerate_extreme_classes(&Graph::petersen(), SupportMode::FullOnly).unwrap();
        assert_eq!(pet.len(), 64);

        // every vertex subset of the triangle has trivial quotient
        let all = enumerate_extreme_classes(&Graph::complete(3), SupportMode::AllSubsets).unwrap();
        assert_eq!(all.len(), 7);

        let big = Graph::new(17, &[(0, 1)]).unwrap();
        assert!(matches!(
            enumerate_extreme_classes(&big, SupportMode::AllSubsets),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn round_trip_through_sign_patterns() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut tried = 0;
        while tried < 60 {
            let n = rng.gen_range(3..=7);
            let g = random_graph(n, 0.5, &mut rng);
            let support: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.8)).collect();
            if support.is_empty() {
                continue;
            }
            let (sub, _) = g.induced_subgraph(&support).unwrap();
            let basis = h1_basis(&sub);
            let mut class = Cochain::zero(sub.num_edges());
            for rep in &basis.quotient_reps {
                if rng.gen_bool(0.5) {
                    class.xor_assign(rep);
                }
            }
            // also shift by a random coboundary: same class, different bits
            let d: Vec<bool> = (0..sub.num_vertices()).map(|_| rng.gen_bool(0.5)).collect();
            class.xor_assign(&crate::cohomology::coboundary(&sub, &d));
            let diag: Vec<f64> = support.iter().map(|_| rng.gen_range(0.1..2.0)).collect();
            let x = from_sign_pattern(&g, &support, &class, &diag).unwrap();
            tried += 1;

            let r = classify_matrix(&x, TOL);
            assert!(
                r.locally_psd && r.locally_rank1,
                "construction lands in the cone"
            );
            let p = sign_pattern(&x, TOL).unwrap();
            assert_eq!(p.support, support);
            assert!(is_cocycle(&p.subgraph, &p.cochain));
            let got = basis.classify(&p.cochain).class_coordinates.unwrap();
            let want = basis.classify(&class).class_coordinates.unwrap();
            assert_eq!(got, want, "round trip preserves the class");
        }
    }

    #[test]
    fn congruence_shifts_patterns_by_coboundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..40 {
            let n = rng.gen_range(3..=7);
            let g = random_graph(n, 0.6, &mut rng);
            let support: Vec<usize> = (0..n).collect();
            let (sub, _) = g.induced_subgraph(&support).unwrap();
            let basis: CohomologyBasis = h1_basis(&sub);
            let mut class = Cochain::zero(sub.num_edges());
            for rep in &basis.quotient_reps {
                if rng.gen_bool(0.5) {
                    class.xor_assign(rep);
                }
            }
            let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
            let x = from_sign_pattern(&g, &support, &class, &diag).unwrap();
            let d: Vec<f64> = (0..n)
                .map(|_| {
                    let v = rng.gen_range(0.2..2.0);
                    if rng.gen_bool(0.5) {
                        -v
                    } else {
                        v
                    }
                })
                .collect();
            let y = diagonal_congruence(&x, &d);

            let rx = classify_matrix(&x, TOL);
            let ry = classify_matrix(&y, TOL);
            assert_eq!(rx.locally_psd, ry.locally_psd);
            assert_eq!(rx.pos_minus, ry.pos_minus);
            assert_eq!(rx.locally_rank1, ry.locally_rank1);

            let px = sign_pattern(&x, TOL).unwrap();
            let py = sign_pattern(&y, TOL).unwrap();
            let mut sum = px.cochain.clone();
            sum.xor_assign(&py.cochain);
            assert!(
                coboundary_potential(&px.subgraph, &sum).is_some(),
                "patterns differ by a coboundary"
            );
        }
    }

    #[test]
    fn pullback_examples() {
        let o4 = Graph::cycle(4);
        let x = extremal_o4();
        let id = VertexMap::identity(&o4);
        assert_eq!(matrix_pullback(&id, &x), x);

        // wrap O_8 over O_4: the identity pulls back to the identity
        let o8 = Graph::cycle(8);
        let phi = VertexMap::new(o8.clone(), o4.clone(), (0..8).map(|i| i % 4).collect()).unwrap();
        let i4 = PartialMatrix::identity(o4.clone());
        assert_eq!(matrix_pullback(&phi, &i4), PartialMatrix::identity(o8));

        // contraction: the collapsed edge reads the merged diagonal
        let o5 = Graph::cycle(5);
        let (c4, cmap) = o5.contract_edge(0, 1).unwrap();
        let mut y = PartialMatrix::identity(c4);
        y.set_diag(0, 2.0);
        let back = matrix_pullback(&cmap, &y);
        assert_eq!(back.diag(0), 2.0);
        assert_eq!(back.diag(1), 2.0);
        assert_eq!(back.edge_value(0, 1), Some(2.0));
    }

    #[test]
    fn pullback_preserves_local_psdness() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..40 {
            let nc = rng.gen_range(3..=6);
            let h = random_graph(nc, 0.6, &mut rng);
            let x = PartialMatrix::project(h.clone(), &random_gram(nc, 3, &mut rng)).unwrap();
            assert!(classify_matrix(&x, 1e-8).locally_psd);
            let nd = rng.gen_range(3..=6);
            let images: Vec<usize> = (0..nd).map(|_| rng.gen_range(0..nc)).collect();
            let mut dedges = Vec::new();
            for i in 0..nd {
                for j in (i + 1)..nd {
                    let (a, b) = (images[i], images[j]);
                    if (a == b || h.has_edge(a, b)) && rng.gen_bool(0.7) {
                        dedges.push((i, j));
                    }
                }
            }
            let g = Graph::new(nd, &dedges).unwrap();
            let phi = VertexMap::new(g, h.clone(), images).unwrap();
            let y = matrix_pullback(&phi, &x);
            assert!(classify_matrix(&y, 1e-8).locally_psd);
        }
    }

    #[test]
    fn pulled_back_identity_congruence_has_boolean_spectrum() {
        // the zero completion of D·φ*(I_H)·D splits into one block per
        // fiber; with the trace normalization each block is rank 1 with
        // unit trace, so the spectrum is {0, 1}
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..25 {
            let n = rng.gen_range(4..=7);
            let g = loop {
                let g = random_graph(n, 0.6, &mut rng);
                if g.num_edges() > 0 {
                    break g;
                }
            };
            // φ: either an identity or a single edge contraction, so that
            // every fiber induces a clique
            let contract = rng.gen_bool(0.7);
            let (h, phi) = if contract {
                let &(a, b) = g.edges().iter().choose(&mut rng).unwrap();
                g.contract_edge(a, b).unwrap()
            } else {
                (g.clone(), VertexMap::identity(&g))
            };
            // X: random extreme locally-rank-1 matrix with full support
            let basis = h1_basis(&g);
            let mut class = Cochain::zero(g.num_edges());
            for rep in &basis.quotient_reps {
                if rng.gen_bool(0.5) {
                    class.xor_assign(rep);
                }
            }
            let support: Vec<usize> = (0..n).collect();
            let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..2.0)).collect();
            let mut x = from_sign_pattern(&g, &support, &class, &diag).unwrap();
            let tr = x.trace();
            x = x.scaled(1.0 / tr);

            // Y diagonal on H sums X over fibers; D renormalizes
            let mut y_diag = vec![0.0; h.num_vertices()];
            for v in 0..n {
                y_diag[phi.apply(v)] += x.diag(v);
            }
            let y =
                PartialMatrix::new(h.clone(), y_diag.clone(), vec![0.0; h.num_edges()]).unwrap();
            assert!((y.trace() - x.trace()).abs() < 1e-12);

            let d: Vec<f64> = (0..n)
                .map(|v| {
                    let denom = y_diag[phi.apply(v)];
                    if denom > 0.0 {
                        (x.diag(v) / denom).sqrt()
                    } else {
                        0.0
                    }
                })
                .collect();
            let j = diagonal_congruence(&matrix_pullback(&phi, &PartialMatrix::identity(h)), &d);
            let eig = sym_eigen(&j.zero_completion());
            for &lambda in &eig.values {
                let near01 = lambda.abs() < 1e-9 || (lambda - 1.0).abs() < 1e-9;
                assert!(near01, "eigenvalue {lambda} outside {{0, 1}}");
            }
        }
    }
}
