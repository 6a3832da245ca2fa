//! Additive distance from a pattern to its completable cone.
//!
//! For a pattern `G`, the distance is the largest diagonal shift needed to
//! complete any unit-trace matrix that is PSD on every clique of `G`; the
//! edge-block variant relaxes "every clique" to "every edge".  Lower bounds
//! come from explicit witnesses — a support, a sign class on its edges, and
//! an optimized diagonal — each certified by one completion-margin call.
//! Upper bounds come only from structure: chordality, triangle-free
//! series-parallel girth, clique separators, and treewidth.

use crate::cohomology::{is_completely_surjective, sign_class_reps, Cochain, SurjectivityMode};
use crate::completion::eps_of_matrix;
use crate::graph::{Graph, VertexMap};
use crate::matrix::{
    enumerate_extreme_classes, from_edge_signs, from_sign_pattern, PartialMatrix, SupportMode,
};
use crate::stats::{
    chordal_girth, graph_stats, is_chordal, is_series_parallel, minimum_induced_cycle,
};
use crate::thicken::{reduce_thickened, ThickenedSpec};
use crate::{Error, Result};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// How deep the clique-separator decomposition recurses before giving up.
const SEPARATOR_RECURSION_DEPTH: usize = 6;
/// Largest vertex count on which separator decompositions are attempted.
const SEPARATOR_VERTEX_CAP: usize = 40;
/// Largest class-space dimension enumerated for full-support edge signs.
const EDGE_SIGN_DIM_CAP: usize = 12;
/// Largest class-space dimension enumerated per subset support for edge signs.
const EDGE_SIGN_SUBSET_DIM_CAP: usize = 8;
/// Largest vertex count for which subset supports are enumerated.
const SUBSET_SUPPORT_VERTEX_CAP: usize = 16;

/// Exact distance for the cycle on `len` vertices:
/// `(sec(π/len) − 1) / len`.
pub fn eps_cycle_exact(len: usize) -> Result<f64> {
    if len < 4 {
        return Err(Error::CycleTooShort(len));
    }
    Ok(cycle_eps(len))
}

/// Like [`eps_cycle_exact`] but maps the (chordal, hence completable)
/// triangle to zero instead of erroring.
pub fn eps_cycle_or_zero(len: usize) -> Result<f64> {
    match len {
        0..=2 => Err(Error::CycleTooShort(len)),
        3 => Ok(0.0),
        _ => Ok(cycle_eps(len)),
    }
}

fn cycle_eps(len: usize) -> f64 {
    let l = len as f64;
    ((PI / l).cos().recip() - 1.0) / l
}

/// The cycle distance extended to the degenerate lengths that appear in
/// lengthening bounds: a two-edge path closes no cycle (infinite distance),
/// and a triangle keeps its raw secant value rather than the completable 0.
fn cycle_eps_extended(len: usize) -> f64 {
    if len == 2 {
        f64::INFINITY
    } else {
        cycle_eps(len)
    }
}

/// Locally-rank-1 matrix achieving a certified lower bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpsWitness {
    /// Vertices carrying nonzero diagonal, ascending, in original labels.
    pub support: Vec<usize>,
    /// Edges carrying negative entries, in original labels.
    pub class: Vec<(usize, usize)>,
    /// Diagonal values parallel to `support`, summing to one.
    pub diagonal: Vec<f64>,
}

/// Result of a distance search: a certified lower bound, an optional
/// structural upper bound, and the witness reproducing the lower bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpsEstimate {
    pub lower: f64,
    pub upper: Option<f64>,
    pub witness: EpsWitness,
    pub method: String,
    pub budget_used: usize,
}

/// Outcome of checking the pullback inequality along a vertex map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomoBoundCheck {
    pub holds: bool,
    pub eps_domain: f64,
    pub eps_codomain: f64,
}

/// Rebuild the partial matrix described by a witness.  Edge signs are taken
/// as recorded, without requiring them to form a cocycle, so witnesses from
/// both the clique and the edge-block searches replay through this.
pub fn witness_matrix(g: &Graph, w: &EpsWitness) -> Result<PartialMatrix> {
    let (sub, old) = g.induced_subgraph(&w.support)?;
    let mut class = Cochain::zero(sub.num_edges());
    for &(a, b) in &w.class {
        let (lo, hi) = (a.min(b), a.max(b));
        let pos = sub
            .edges()
            .iter()
            .position(|&(p, q)| (old[p], old[q]) == (lo, hi));
        match pos {
            Some(e) => class.set(e, true),
            None => {
                return Err(Error::InvalidCochain(format!(
                    "witness edge ({a}, {b}) is not a support edge"
                )))
            }
        }
    }
    from_edge_signs(g, &w.support, &class, &w.diagonal)
}

/// Estimate the distance of `g` with at most `budget` margin evaluations.
///
/// The lower bound is certified: the returned witness replays to it through
/// [`witness_matrix`] and [`eps_of_matrix`].  The upper bound, when present,
/// is exact structure (chordality, girth of a triangle-free series-parallel
/// pattern, or a clique-separator decomposition into such parts).
pub fn eps_estimate(g: &Graph, budget: usize, seed: u64, tol: f64) -> Result<EpsEstimate> {
    validate_search_params(budget, tol)?;
    if is_chordal(g) {
        return Ok(chordal_estimate(g));
    }
    let cands = cocycle_candidates(g, budget);
    let mut search = Search::new(g, tol, budget, false);
    let screened = screen(&mut search, &cands);
    polish_top(&mut search, &cands, &screened, seed);
    let upper = upper_structural(g, SEPARATOR_RECURSION_DEPTH);
    finish(g, search, upper, "extreme-ray-search")
}

/// Estimate the edge-block distance of `g`.  Candidates may carry arbitrary
/// edge signs; the upper bound is always `1 − 2/(tw(G)+1)` from treewidth.
pub fn eps_minus_estimate(g: &Graph, budget: usize, seed: u64, tol: f64) -> Result<EpsEstimate> {
    validate_search_params(budget, tol)?;
    let (_, tw_upper) = bound_minus(g);
    if g.triangles().is_empty() {
        // without triangles every edge-block-PSD matrix is clique-block PSD,
        // so the two distances coincide
        let mut est = eps_estimate(g, budget, seed, tol)?;
        est.upper = Some(est.upper.map_or(tw_upper, |u| u.min(tw_upper)));
        return Ok(est);
    }
    let cands = edge_sign_candidates(g, budget);
    let mut search = Search::new(g, tol, budget, true);
    let screened = screen(&mut search, &cands);
    polish_top(&mut search, &cands, &screened, seed);
    finish(g, search, Some(tw_upper), "edge-sign-search")
}

/// Estimate the distance of the graph a thickening builds.  The search runs
/// natively on the built graph; the reduced graph contributes its structural
/// upper bound, which transfers because reduction preserves the distance.
pub fn eps_estimate_thickened(
    spec: &ThickenedSpec,
    budget: usize,
    seed: u64,
    tol: f64,
) -> Result<EpsEstimate> {
    validate_search_params(budget, tol)?;
    let red = reduce_thickened(spec)?;
    let mut est = eps_estimate(&red.initial, budget, seed, tol)?;
    if let Some(u) = upper_structural(&red.graph, SEPARATOR_RECURSION_DEPTH) {
        if est.upper.map_or(true, |cur| u < cur) {
            est.upper = Some(est.upper.map_or(u, |cur| cur.min(u)));
            est.method = format!("{}+reduction", est.method);
        }
    }
    Ok(est)
}

/// Clique-number and treewidth sandwich for the edge-block distance:
/// `1 − 2/ω(G) ≤ ε⁻(G) ≤ 1 − 2/(tw(G)+1)`.
pub fn bound_minus(g: &Graph) -> (f64, f64) {
    let st = graph_stats(g);
    let lower = if st.clique_number >= 2 {
        1.0 - 2.0 / st.clique_number as f64
    } else {
        0.0
    };
    let upper = if st.treewidth_upper >= 2 {
        1.0 - 2.0 / (st.treewidth_upper as f64 + 1.0)
    } else {
        0.0
    };
    (lower.max(0.0), upper.max(0.0))
}

/// Distance bound after replacing every edge by a path of `ell` edges:
/// `ε(O_ell)·e / (ε(O_ell) + 2e)` where `e` bounds the edge-block distance
/// of the original pattern.  At `ell = 2` the cycle term is infinite and the
/// bound degenerates to `e` itself.
pub fn bound_lengthening(g: &Graph, ell: usize, eps_minus: f64) -> Result<f64> {
    if g.num_edges() == 0 {
        return Err(Error::InvalidParameter(
            "lengthening a graph with no edges".into(),
        ));
    }
    if ell < 2 {
        return Err(Error::InvalidParameter(format!(
            "lengthening factor {ell} must be at least 2"
        )));
    }
    if !eps_minus.is_finite() || eps_minus < 0.0 {
        return Err(Error::InvalidParameter(
            "edge-block distance must be finite and nonnegative".into(),
        ));
    }
    Ok(lengthened_mix(cycle_eps_extended(ell), eps_minus))
}

/// Same bound as [`bound_lengthening`] for a general thickening whose marked
/// vertices are far apart: the path length is the least terminal distance
/// over all pieces.
pub fn bound_far(spec: &ThickenedSpec, eps_minus_base: f64) -> Result<f64> {
    spec.validate()?;
    if !eps_minus_base.is_finite() || eps_minus_base < 0.0 {
        return Err(Error::InvalidParameter(
            "edge-block distance must be finite and nonnegative".into(),
        ));
    }
    if spec.pieces.is_empty() {
        return Err(Error::InvalidParameter(
            "thickening has no pieces to bound".into(),
        ));
    }
    let mut ell = usize::MAX;
    for (i, piece) in spec.pieces.iter().enumerate() {
        let d = piece.marked_distance().ok_or_else(|| {
            Error::InvalidThickening(format!("piece {i} has disconnected marked vertices"))
        })?;
        ell = ell.min(d);
    }
    if ell < 2 {
        return Err(Error::InvalidParameter(
            "a piece has marked vertices at distance below 2; the far-apart bound does not apply"
                .into(),
        ));
    }
    Ok(lengthened_mix(cycle_eps_extended(ell), eps_minus_base))
}

fn lengthened_mix(eps_cycle: f64, e: f64) -> f64 {
    if e == 0.0 {
        0.0
    } else if eps_cycle.is_infinite() {
        e
    } else {
        eps_cycle * e / (eps_cycle + 2.0 * e)
    }
}

/// The distance of a clique sum is attained on one side.
pub fn clique_sum_combine(a: f64, b: f64) -> f64 {
    a.max(b)
}

/// Approximation ratio surviving a diagonal shift of `eps` spread over
/// `num_vertices` unit-diagonal entries.
pub fn gw_ratio(num_vertices: usize, eps: f64) -> f64 {
    1.0 / (1.0 + num_vertices as f64 * eps)
}

/// Check the pullback inequality `ε(domain) ≤ ε(codomain)` along `phi`.
///
/// `phi` must be verified completely surjective on degree-1 cohomology, and
/// the domain's extreme rays must be known locally rank 1 — guaranteed when
/// the domain is triangle-free or when the map comes from a thickening
/// reduction (the `Structural` mode).  `holds` compares the certified lower
/// bound of the domain against the best available value of the codomain with
/// `3·tol` slack.
pub fn verify_homo_bound(
    phi: &VertexMap,
    mode: SurjectivityMode<'_>,
    budget: usize,
    seed: u64,
    tol: f64,
) -> Result<HomoBoundCheck> {
    validate_search_params(budget, tol)?;
    let structural = matches!(&mode, SurjectivityMode::Structural { .. });
    let report = is_completely_surjective(phi, mode)?;
    if !report.result {
        return Err(Error::SurjectivityUnverified(report.certificate));
    }
    if !structural && !phi.domain.triangles().is_empty() {
        return Err(Error::InvalidParameter(
            "domain has triangles; the pullback bound needs locally-rank-1 extreme rays".into(),
        ));
    }
    let dom = eps_estimate(&phi.domain, budget, seed, tol)?;
    let cod = eps_estimate(&phi.codomain, budget, seed.wrapping_add(1), tol)?;
    let eps_codomain = cod.upper.unwrap_or(cod.lower);
    Ok(HomoBoundCheck {
        holds: dom.lower <= eps_codomain + 3.0 * tol,
        eps_domain: dom.lower,
        eps_codomain,
    })
}

fn validate_search_params(budget: usize, tol: f64) -> Result<()> {
    if budget == 0 {
        return Err(Error::BudgetExhausted);
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be positive and finite"
        )));
    }
    Ok(())
}

fn chordal_estimate(g: &Graph) -> EpsEstimate {
    let n = g.num_vertices();
    // With an edge present, the uniform full-support matrix has margin 0
    // (any edge block is singular), so it replays the bound exactly. On an
    // edgeless graph every positive diagonal has positive margin; a single
    // loaded vertex next to a zero one is margin-0 instead.
    let witness = if n == 0 {
        EpsWitness {
            support: Vec::new(),
            class: Vec::new(),
            diagonal: Vec::new(),
        }
    } else if g.num_edges() == 0 && n >= 2 {
        EpsWitness {
            support: vec![0],
            class: Vec::new(),
            diagonal: vec![1.0],
        }
    } else {
        EpsWitness {
            support: (0..n).collect(),
            class: Vec::new(),
            diagonal: vec![1.0 / n as f64; n],
        }
    };
    EpsEstimate {
        lower: 0.0,
        upper: Some(0.0),
        witness,
        method: "chordal".into(),
        budget_used: 0,
    }
}

// ---------------------------------------------------------------------------
// Candidate search

struct Candidate {
    support: Vec<usize>,
    class: Cochain,
}

struct Search<'a> {
    g: &'a Graph,
    tol: f64,
    budget: usize,
    used: usize,
    edge_signs: bool,
    best: f64,
    witness: Option<(Vec<usize>, Cochain, Vec<f64>)>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, tol: f64, budget: usize, edge_signs: bool) -> Search<'a> {
        Search {
            g,
            tol,
            budget,
            used: 0,
            edge_signs,
            best: f64::NEG_INFINITY,
            witness: None,
        }
    }

    fn remaining(&self) -> usize {
        self.budget - self.used
    }

    /// One margin evaluation; `None` once the budget is spent.
    fn eval(&mut self, cand: &Candidate, diag: &[f64]) -> Option<f64> {
        if self.used >= self.budget {
            return None;
        }
        self.used += 1;
        let x = if self.edge_signs {
            from_edge_signs(self.g, &cand.support, &cand.class, diag)
        } else {
            from_sign_pattern(self.g, &cand.support, &cand.class, diag)
        }
        .ok()?;
        let v = eps_of_matrix(&x, self.tol).ok()? / x.trace();
        if v > self.best {
            self.best = v;
            self.witness = Some((cand.support.clone(), cand.class.clone(), diag.to_vec()));
        }
        Some(v)
    }
}

/// Screen every candidate once at the uniform diagonal; returns
/// `(candidate index, value)` for those evaluated before the budget ran out.
fn screen(search: &mut Search, cands: &[Candidate]) -> Vec<(usize, f64)> {
    let mut scored = Vec::new();
    for (i, c) in cands.iter().enumerate() {
        let s = c.support.len();
        if s == 0 {
            continue;
        }
        let d = vec![1.0 / s as f64; s];
        match search.eval(c, &d) {
            Some(v) => scored.push((i, v)),
            None => break,
        }
    }
    scored
}

/// Spend the remaining budget polishing the diagonals of the best screeners.
fn polish_top(search: &mut Search, cands: &[Candidate], screened: &[(usize, f64)], seed: u64) {
    let mut order = screened.to_vec();
    order.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.cmp(&b.0))
    });
    let top: Vec<usize> = order.iter().take(3).map(|&(i, _)| i).collect();
    for (k, &i) in top.iter().enumerate() {
        let slice = search.remaining() / (top.len() - k);
        if slice == 0 {
            break;
        }
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(i as u64 + 1));
        polish_diag(search, &cands[i], slice, &mut rng);
    }
}

/// Coordinate ascent over the diagonal simplex from several starts:
/// uniform, degree-weighted, and Dirichlet samples.
fn polish_diag(search: &mut Search, cand: &Candidate, slice: usize, rng: &mut ChaCha8Rng) {
    let s = cand.support.len();
    if s == 0 {
        return;
    }
    let stop_at = (search.used + slice).min(search.budget);
    let sub = match search.g.induced_subgraph(&cand.support) {
        Ok((sub, _)) => sub,
        Err(_) => return,
    };

    let mut starts: Vec<Vec<f64>> = Vec::new();
    starts.push(vec![1.0 / s as f64; s]);
    let mut degw: Vec<f64> = (0..s).map(|v| (sub.degree(v) + 1) as f64).collect();
    normalize_simplex(&mut degw);
    starts.push(degw);
    for _ in 0..6 {
        let mut d: Vec<f64> = (0..s)
            .map(|_| -(rng.gen::<f64>().max(1e-12)).ln())
            .collect();
        normalize_simplex(&mut d);
        starts.push(d);
    }

    'starts: for start in starts {
        if search.used >= stop_at {
            break;
        }
        let mut d = start;
        let mut fbest = match search.eval(cand, &d) {
            Some(v) => v,
            None => break,
        };
        for _sweep in 0..2 {
            let mut order: Vec<usize> = (0..s).collect();
            order.shuffle(rng);
            for &i in &order {
                if search.used >= stop_at {
                    break 'starts;
                }
                // multiplicative probes on coordinate i, mass redistributed
                // proportionally over the rest
                let cur = d[i];
                let rest = 1.0 - cur;
                if rest < 1e-9 {
                    continue;
                }
                for factor in [0.5, 0.75, 1.5, 2.5] {
                    if search.used >= stop_at {
                        break 'starts;
                    }
                    let t = (cur * factor).clamp(1e-7, 0.98);
                    if (t - cur).abs() < 1e-12 {
                        continue;
                    }
                    let scale = (1.0 - t) / rest;
                    let mut trial = d.clone();
                    for (j, w) in trial.iter_mut().enumerate() {
                        *w = if j == i { t } else { (*w * scale).max(1e-12) };
                    }
                    normalize_simplex(&mut trial);
                    if let Some(v) = search.eval(cand, &trial) {
                        if v > fbest {
                            fbest = v;
                            d = trial;
                        }
                    } else {
                        break 'starts;
                    }
                }
            }
        }
    }
}

fn normalize_simplex(d: &mut [f64]) {
    let sum: f64 = d.iter().sum();
    if sum > 0.0 {
        for v in d.iter_mut() {
            *v /= sum;
        }
    }
}

/// A minimum induced cycle with one negative edge: the classical extremal
/// configuration, always evaluated first so short budgets still certify the
/// girth floor.
fn girth_candidate(g: &Graph) -> Option<Candidate> {
    let cycle = minimum_induced_cycle(g)?;
    let mut support = cycle;
    support.sort_unstable();
    let (sub, _) = g.induced_subgraph(&support).ok()?;
    if sub.num_edges() == 0 {
        return None;
    }
    let mut class = Cochain::zero(sub.num_edges());
    class.set(0, true);
    Some(Candidate { support, class })
}

/// Candidates whose sign class vanishes on triangles: the minimum induced
/// cycle first, then full-support classes, then smaller supports by size.
fn cocycle_candidates(g: &Graph, cap: usize) -> Vec<Candidate> {
    let mut out = Vec::new();
    if let Some(c) = girth_candidate(g) {
        out.push(c);
    }
    if let Ok(full) = enumerate_extreme_classes(g, SupportMode::FullOnly) {
        for ec in full {
            if out.len() >= cap {
                return out;
            }
            if ec.coords.iter().any(|&b| b) {
                out.push(Candidate {
                    support: ec.support,
                    class: ec.representative,
                });
            }
        }
    }
    if g.num_vertices() <= SUBSET_SUPPORT_VERTEX_CAP && out.len() < cap {
        if let Ok(mut subs) = enumerate_extreme_classes(g, SupportMode::AllSubsets) {
            // stable sort keeps deterministic mask order within each size
            subs.sort_by(|a, b| b.support.len().cmp(&a.support.len()));
            for ec in subs {
                if out.len() >= cap {
                    break;
                }
                if ec.support.len() >= 4
                    && ec.support.len() < g.num_vertices()
                    && ec.coords.iter().any(|&b| b)
                {
                    out.push(Candidate {
                        support: ec.support,
                        class: ec.representative,
                    });
                }
            }
        }
    }
    out
}

/// Candidates with arbitrary edge signs: the densest clique fully negated
/// first (it attains `1 − 2/ω`), then sign classes modulo vertex flips on
/// the full support, then on smaller supports.
fn edge_sign_candidates(g: &Graph, cap: usize) -> Vec<Candidate> {
    let n = g.num_vertices();
    let mut out = Vec::new();

    let mut best_clique: Option<&Vec<usize>> = None;
    let cliques = g.maximal_cliques();
    for c in &cliques {
        if best_clique.map_or(true, |b| c.len() > b.len()) {
            best_clique = Some(c);
        }
    }
    if let Some(cl) = best_clique {
        let mut support = cl.clone();
        support.sort_unstable();
        if let Ok((sub, _)) = g.induced_subgraph(&support) {
            if sub.num_edges() > 0 {
                let mut class = Cochain::zero(sub.num_edges());
                for e in 0..class.len() {
                    class.set(e, true);
                }
                out.push(Candidate { support, class });
            }
        }
    }

    if let Ok(reps) = sign_class_reps(g, EDGE_SIGN_DIM_CAP) {
        for class in reps {
            if out.len() >= cap {
                return out;
            }
            if class.weight() > 0 {
                out.push(Candidate {
                    support: (0..n).collect(),
                    class,
                });
            }
        }
    }

    if n <= SUBSET_SUPPORT_VERTEX_CAP && out.len() < cap {
        let mut masks: Vec<u64> = (1..(1u64 << n)).collect();
        masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
        for m in masks {
            if out.len() >= cap {
                break;
            }
            let size = m.count_ones() as usize;
            if size < 3 || size == n {
                // supports on at most one edge are always completable
                continue;
            }
            let support: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
            let sub = match g.induced_subgraph(&support) {
                Ok((sub, _)) => sub,
                Err(_) => continue,
            };
            if sub.num_edges() == 0 {
                continue;
            }
            if let Ok(reps) = sign_class_reps(&sub, EDGE_SIGN_SUBSET_DIM_CAP) {
                for class in reps {
                    if out.len() >= cap {
                        break;
                    }
                    if class.weight() > 0 {
                        out.push(Candidate {
                            support: support.clone(),
                            class,
                        });
                    }
                }
            }
        }
    }
    out
}

fn finish(g: &Graph, search: Search, upper: Option<f64>, method: &str) -> Result<EpsEstimate> {
    let (support, class, diagonal) = match search.witness {
        Some(w) => w,
        // non-chordal searches always field at least one candidate within
        // any positive budget, so this is the chordal-free fallback only
        None => {
            let n = g.num_vertices();
            (
                (0..n).collect(),
                Cochain::zero(g.num_edges()),
                if n == 0 {
                    Vec::new()
                } else {
                    vec![1.0 / n as f64; n]
                },
            )
        }
    };
    let (sub, old) = g.induced_subgraph(&support)?;
    let class_edges: Vec<(usize, usize)> = class
        .ones_edges(&sub)
        .iter()
        .map(|&(a, b)| (old[a], old[b]))
        .collect();
    Ok(EpsEstimate {
        // the true distance is nonnegative, so a negative certified bound
        // carries no information beyond zero
        lower: search.best.max(0.0),
        upper,
        witness: EpsWitness {
            support,
            class: class_edges,
            diagonal,
        },
        method: method.into(),
        budget_used: search.used,
    })
}

// ---------------------------------------------------------------------------
// Structural upper bounds

/// Best exact upper bound derivable from structure alone: zero for chordal
/// patterns, the girth value for triangle-free series-parallel patterns, and
/// otherwise the best clique-separator decomposition into such parts.
fn upper_structural(g: &Graph, depth: usize) -> Option<f64> {
    if is_chordal(g) {
        return Some(0.0);
    }
    if g.triangles().is_empty() && is_series_parallel(g) {
        return eps_cycle_exact(chordal_girth(g)?).ok();
    }
    if depth == 0 || g.num_vertices() > SEPARATOR_VERTEX_CAP {
        return None;
    }
    let mut best: Option<f64> = None;
    for sep in separator_candidates(g) {
        let parts = match split_on_clique(g, &sep) {
            Some(parts) => parts,
            None => continue,
        };
        let mut combined = Some(0.0f64);
        for part in &parts {
            match upper_structural(part, depth - 1) {
                Some(u) => combined = combined.map(|c| clique_sum_combine(c, u)),
                None => {
                    combined = None;
                    break;
                }
            }
        }
        if let Some(u) = combined {
            best = Some(best.map_or(u, |b| b.min(u)));
        }
    }
    best
}

/// Cliques worth trying as separators: vertices, edges, triangles, and the
/// maximal cliques.
fn separator_candidates(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.num_vertices();
    let mut out: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    out.extend(g.edges().iter().map(|&(a, b)| vec![a, b]));
    out.extend(g.triangles().iter().map(|t| t.to_vec()));
    out.extend(g.maximal_cliques().into_iter().filter(|c| c.len() >= 4));
    out
}

/// If removing `sep` disconnects the rest, return one part per component,
/// each re-attached to the separator.
fn split_on_clique(g: &Graph, sep: &[usize]) -> Option<Vec<Graph>> {
    let n = g.num_vertices();
    let rest: Vec<usize> = (0..n).filter(|v| !sep.contains(v)).collect();
    if rest.is_empty() {
        return None;
    }
    let (h, old) = g.induced_subgraph(&rest).ok()?;
    let comp = h.components();
    let k = comp.iter().max().map_or(0, |&c| c + 1);
    if k < 2 {
        return None;
    }
    let mut groups: Vec<Vec<usize>> = vec![sep.to_vec(); k];
    for (v, &c) in comp.iter().enumerate() {
        groups[c].push(old[v]);
    }
    Some(
        groups
            .into_iter()
            .map(|mut part| {
                part.sort_unstable();
                g.induced_subgraph(&part)
                    .expect("separator parts are valid vertex lists")
                    .0
            })
            .collect(),
    )
}
