//! PSD completion and the completion margin.
//!
//! The margin of a partial matrix X is the largest minimum eigenvalue any
//! completion of X can achieve; its negative is the additive distance of X
//! from completability. Chordal patterns are exact: the margin equals the
//! worst clique-block eigenvalue and a maximum-determinant elimination fill
//! produces a witness. Everything else runs a smoothed eigenvalue ascent
//! over the free entries; every iterate yields both a feasible witness
//! (lower bound) and a dual certificate (upper bound), and the report's
//! `margin` is always the certified upper bound with the gap recorded in
//! `certified_tol`.

use crate::graph::Graph;
use crate::linalg::{pinv_apply, sym_eigen, SymMatrix};
use crate::matrix::{classify_matrix, PartialMatrix};
use crate::stats::{is_chordal, perfect_elimination_ordering};
use crate::{Error, Result};

/// Total eigendecomposition budget for one margin computation.
const MARGIN_EVAL_CAP: usize = 20000;
/// Ascent iterations per smoothing stage.
const STAGE_ITER_CAP: usize = 100;
/// Quasi-Newton memory.
const LBFGS_MEM: usize = 8;

/// Result of a completion-margin computation.
///
/// `margin` is a certified upper bound on the best achievable minimum
/// eigenvalue; `witness` is the best completion found and satisfies
/// `λ_min(witness) ≥ margin − certified_tol`. `epsilon` is `−margin`.
#[derive(Debug, Clone)]
pub struct MarginReport {
    pub margin: f64,
    pub epsilon: f64,
    pub witness: SymMatrix,
    pub certified_tol: f64,
    /// False when the iteration caps were hit before the bound gap closed.
    pub certified: bool,
    pub iterations: usize,
    pub method: String,
}

/// Tolerance base: all margins are certified relative to max(1, tr X).
fn margin_scale(x: &PartialMatrix) -> f64 {
    x.trace().max(1.0)
}

/// Maximum-determinant PSD completion of a locally-PSD matrix on a chordal
/// pattern. Vertices are processed against a perfect elimination ordering;
/// each one's row toward later non-neighbors is filled with the conditional
/// value b·B⁺·c through its later-neighbor clique, which is the
/// determinant-maximizing choice entry by entry.
pub fn chordal_complete(x: &PartialMatrix) -> Result<SymMatrix> {
    let g = x.graph();
    let n = g.num_vertices();
    let order = perfect_elimination_ordering(g).ok_or(Error::NotChordal)?;
    let scale = margin_scale(x);
    let report = classify_matrix(x, 1e-8 * scale);
    if !report.locally_psd {
        return Err(Error::NotLocallyPsd {
            clique: report.worst_clique,
            lambda_min: report.worst_lambda_min,
        });
    }
    // lift marginally indefinite inputs to exactly locally PSD, complete,
    // and shift back at the end
    let delta = (-report.worst_lambda_min).max(0.0);
    let mut m = x.shifted(delta).zero_completion();
    for k in (0..n.saturating_sub(1)).rev() {
        let u = order[k];
        let later = &order[k + 1..];
        let nbrs: Vec<usize> = later
            .iter()
            .copied()
            .filter(|&w| g.has_edge(u, w))
            .collect();
        let others: Vec<usize> = later
            .iter()
            .copied()
            .filter(|&w| !g.has_edge(u, w))
            .collect();
        if others.is_empty() {
            continue;
        }
        if nbrs.is_empty() {
            // independent of everything later: zero fill
            for &w in &others {
                m.set(u, w, 0.0);
            }
            continue;
        }
        // later neighbors form a clique; their block is fully specified
        let bnn = m.principal(&nbrs);
        let eig = sym_eigen(&bnn);
        let cut = 1e-12 * bnn.max_abs().max(1e-300);
        let b: Vec<f64> = nbrs.iter().map(|&w| m.get(u, w)).collect();
        let t = pinv_apply(&eig, &b, cut);
        for &w in &others {
            let fill = nbrs.iter().zip(&t).map(|(&nb, ti)| ti * m.get(nb, w)).sum();
            m.set(u, w, fill);
        }
    }
    for i in 0..n {
        m.set(i, i, x.diag(i));
    }
    Ok(m)
}

/// Non-edge vertex pairs of the pattern, the free coordinates of a
/// completion.
fn free_pairs(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.num_vertices();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if !g.has_edge(i, j) {
                out.push((i, j));
            }
        }
    }
    out
}

fn assemble(x: &PartialMatrix, free: &[(usize, usize)], z: &[f64]) -> SymMatrix {
    let mut m = x.zero_completion();
    for (k, &(i, j)) in free.iter().enumerate() {
        m.set(i, j, z[k]);
    }
    m
}

/// Running bounds across all evaluations of one margin computation.
struct Bounds {
    lower: f64,
    best_z: Vec<f64>,
    upper: f64,
    evals: usize,
}

/// One smoothed evaluation: value and gradient of the softmin surrogate,
/// plus primal/dual bound updates from the same eigendecomposition.
struct SmoothEval {
    value: f64,
    grad: Vec<f64>,
}

fn smooth_eval(
    x: &PartialMatrix,
    free: &[(usize, usize)],
    z: &[f64],
    mu: f64,
    bounds: &mut Bounds,
) -> SmoothEval {
    let g = x.graph();
    let n = g.num_vertices();
    let m = assemble(x, free, z);
    let eig = sym_eigen(&m);
    bounds.evals += 1;
    let lam0 = eig.lambda_min();
    if lam0 > bounds.lower {
        bounds.lower = lam0;
        bounds.best_z = z.to_vec();
    }
    // softmin value: λ_min − μ ln Σ exp(−(λ_i − λ_min)/μ), always ≤ λ_min
    let mut weights: Vec<f64> = eig
        .values
        .iter()
        .map(|&l| (-(l - lam0) / mu).exp())
        .collect();
    let wsum: f64 = weights.iter().sum();
    let value = lam0 - mu * wsum.ln();
    for w in &mut weights {
        *w /= wsum;
    }
    // Gibbs state W = V diag(weights) Vᵀ: the gradient of the surrogate and
    // a dual certificate in one
    let mut w = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += weights[k] * eig.vectors.get(i, k) * eig.vectors.get(j, k);
            }
            w.set(i, j, acc);
        }
    }
    let grad: Vec<f64> = free.iter().map(|&(i, j)| 2.0 * w.get(i, j)).collect();
    // zeroing W outside the pattern and mixing with ηI gives a dual-feasible
    // matrix (PSD, unit trace, supported on the pattern), so its pairing
    // with X upper-bounds every completion's minimum eigenvalue
    let eta = {
        let off: f64 = free.iter().map(|&(i, j)| 2.0 * w.get(i, j).powi(2)).sum();
        off.sqrt()
    };
    let mut pairing = 0.0;
    for i in 0..n {
        pairing += w.get(i, i) * x.diag(i);
    }
    for (e, &(i, j)) in g.edges().iter().enumerate() {
        pairing += 2.0 * w.get(i, j) * x.offdiag()[e];
    }
    let upper = (pairing + eta * x.trace()) / (1.0 + n as f64 * eta);
    if upper < bounds.upper {
        bounds.upper = upper;
    }
    SmoothEval { value, grad }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Tighten the dual upper bound at a fixed point. At a maximizer the
/// minimum eigenvalue is typically multiple and the dual-feasible matrix is
/// a particular PSD mixture inside the bottom eigenspace, which the Gibbs
/// state does not produce. For each bottom-cluster size k this solves a
/// trace-constrained least-squares problem for the k×k mixture with the
/// smallest off-pattern residual, then repairs the residual and any
/// negativity by mixing with the identity — sound for every symmetric
/// trace-1 candidate, so the bound holds regardless of solve quality.
fn refine_upper(x: &PartialMatrix, free: &[(usize, usize)], z: &[f64], bounds: &mut Bounds) {
    let g = x.graph();
    let n = g.num_vertices();
    if n == 0 {
        return;
    }
    let m = assemble(x, free, z);
    let eig = sym_eigen(&m);
    bounds.evals += 1;
    let lam0 = eig.lambda_min();
    if lam0 > bounds.lower {
        bounds.lower = lam0;
        bounds.best_z = z.to_vec();
    }
    let trx = x.trace();
    let idx = |p: usize, q: usize| q * (q + 1) / 2 + p; // p <= q
    for k in 1..=n.min(10) {
        let dim = k * (k + 1) / 2;
        // KKT system for min sᵀQs + ridge subject to tr S = 1
        let mut kkt = SymMatrix::zeros(dim + 1);
        for &(i, j) in free {
            let mut a = vec![0.0; dim];
            for q in 0..k {
                for p in 0..=q {
                    let sym = eig.vectors.get(i, p) * eig.vectors.get(j, q)
                        + eig.vectors.get(i, q) * eig.vectors.get(j, p);
                    a[idx(p, q)] = if p == q { sym / 2.0 } else { sym };
                }
            }
            for r in 0..dim {
                for c in r..dim {
                    kkt.set(r, c, kkt.get(r, c) + a[r] * a[c]);
                }
            }
        }
        // small ridge keeps the solution near the center of the zero set,
        // where it is most likely to already be positive semidefinite
        for q in 0..k {
            for p in 0..=q {
                let r = idx(p, q);
                let w = if p == q { 1.0 } else { 2.0 };
                kkt.set(r, r, kkt.get(r, r) + 1e-10 * w);
            }
        }
        for p in 0..k {
            kkt.set(idx(p, p), dim, 1.0);
        }
        let keig = sym_eigen(&kkt);
        let mut rhs = vec![0.0; dim + 1];
        rhs[dim] = 1.0;
        let cut = 1e-14 * kkt.max_abs().max(1e-300);
        let sol = pinv_apply(&keig, &rhs, cut);
        let tr: f64 = (0..k).map(|p| sol[idx(p, p)]).sum();
        if !tr.is_finite() || tr.abs() < 1e-6 {
            continue;
        }
        let mut s = SymMatrix::zeros(k);
        for q in 0..k {
            for p in 0..=q {
                s.set(p, q, sol[idx(p, q)] / tr);
            }
        }
        let rho = (-sym_eigen(&s).lambda_min()).max(0.0);
        // W = V_k S V_kᵀ over the bottom-k eigenvectors
        let mut w = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for p in 0..k {
                    for q in 0..k {
                        acc += eig.vectors.get(i, p) * s.get(p, q) * eig.vectors.get(j, q);
                    }
                }
                w.set(i, j, acc);
            }
        }
        let eta = free
            .iter()
            .map(|&(i, j)| 2.0 * w.get(i, j).powi(2))
            .sum::<f64>()
            .sqrt();
        let mix = eta + rho;
        let mut pairing = 0.0;
        for i in 0..n {
            pairing += w.get(i, i) * x.diag(i);
        }
        for (e, &(i, j)) in g.edges().iter().enumerate() {
            pairing += 2.0 * w.get(i, j) * x.offdiag()[e];
        }
        let upper = (pairing + mix * trx) / (1.0 + n as f64 * mix);
        if upper < bounds.upper {
            bounds.upper = upper;
        }
    }
}

/// Maximize the softmin surrogate at fixed μ by limited-memory BFGS with
/// backtracking. Updates `z` in place; stops on the stage cap, a failed line
/// search, or the global gap/eval budget.
fn ascend_stage(
    x: &PartialMatrix,
    free: &[(usize, usize)],
    z: &mut Vec<f64>,
    mu: f64,
    target: f64,
    bounds: &mut Bounds,
) {
    let mut eval = smooth_eval(x, free, z, mu, bounds);
    let mut history: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::new(); // (s, y, 1/yᵀs)
    for _ in 0..STAGE_ITER_CAP {
        if bounds.upper - bounds.lower <= target || bounds.evals >= MARGIN_EVAL_CAP {
            return;
        }
        // two-loop recursion on the descent problem for −value
        let mut q: Vec<f64> = eval.grad.iter().map(|g| -g).collect();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, y, rho) in history.iter().rev() {
            let a = rho * dot(s, &q);
            for (qi, yi) in q.iter_mut().zip(y) {
                *qi -= a * yi;
            }
            alphas.push(a);
        }
        if let Some((s, y, _)) = history.last() {
            let gamma = dot(s, y) / dot(y, y).max(1e-300);
            for qi in &mut q {
                *qi *= gamma;
            }
        }
        for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
            let beta = rho * dot(y, &q);
            for (qi, si) in q.iter_mut().zip(s) {
                *qi += (a - beta) * si;
            }
        }
        // q now approximates −H⁻¹∇(−f); the ascent direction is −q
        let mut dir: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(&eval.grad, &dir);
        if slope <= 0.0 {
            history.clear();
            dir = eval.grad.clone();
            slope = dot(&dir, &dir);
            if slope <= 1e-30 {
                return; // stationary
            }
        }
        // backtracking Armijo line search on the surrogate
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            if bounds.evals >= MARGIN_EVAL_CAP {
                return;
            }
            let trial: Vec<f64> = z.iter().zip(&dir).map(|(zi, di)| zi + step * di).collect();
            let te = smooth_eval(x, free, &trial, mu, bounds);
            if te.value >= eval.value + 1e-4 * step * slope {
                accepted = Some((trial, te));
                break;
            }
            step *= 0.5;
        }
        let Some((znew, enew)) = accepted else {
            return; // no ascent at this smoothing level
        };
        let s: Vec<f64> = znew.iter().zip(z.iter()).map(|(a, b)| a - b).collect();
        // gradient difference of the minimization objective −f
        let y: Vec<f64> = eval
            .grad
            .iter()
            .zip(&enew.grad)
            .map(|(old, new)| old - new)
            .collect();
        let ys = dot(&y, &s);
        // curvature check keeps the inverse Hessian estimate positive
        if ys > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt().max(1e-300) {
            if history.len() == LBFGS_MEM {
                history.remove(0);
            }
            history.push((s, y, 1.0 / ys));
        }
        let progress = enew.value - eval.value;
        *z = znew;
        eval = enew;
        if progress < 1e-4 * mu {
            return; // converged at this smoothing level
        }
    }
}

/// Candidate active-multiplicity sizes read off the spectrum: positions of
/// the largest relative gaps in the bottom window.
fn cluster_candidates(values: &[f64], scale: f64) -> Vec<usize> {
    let n = values.len();
    let window = n.min(8);
    let lam0 = values[0];
    let mut scored: Vec<(f64, usize)> = (1..window)
        .map(|j| {
            let ratio = (values[j] - values[j - 1]) / (values[j - 1] - lam0 + 1e-12 * scale);
            (ratio, j)
        })
        .collect();
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut out: Vec<usize> = scored
        .iter()
        .take(3)
        .map(|&(_, j)| j)
        .filter(|&j| j >= 2)
        .collect();
    out.dedup();
    out
}

/// Polish a near-optimal point on the manifold of completions whose bottom
/// k eigenvalues coincide. Each step solves one minimum-norm least-squares
/// system with two right-hand sides: a Gauss–Newton recoalescing residual
/// and a direction that raises the common cluster level. Line-searching the
/// raise drives the iterate to the true maximizer far faster than
/// first-order ascent, and at the maximizer the raise is rejected, which is
/// exactly when the bottom-cluster dual certificate becomes tight.
fn coalesce_polish(
    x: &PartialMatrix,
    free: &[(usize, usize)],
    z: &mut Vec<f64>,
    target: f64,
    bounds: &mut Bounds,
) {
    let first = sym_eigen(&assemble(x, free, z));
    bounds.evals += 1;
    if first.lambda_min() > bounds.lower {
        bounds.lower = first.lambda_min();
        bounds.best_z = z.clone();
    }
    let candidates = cluster_candidates(&first.values, margin_scale(x));
    for k in candidates {
        let mut zk = z.clone();
        let mut stalls = 0;
        for _ in 0..25 {
            if bounds.upper - bounds.lower <= target || bounds.evals >= MARGIN_EVAL_CAP {
                break;
            }
            let eig = sym_eigen(&assemble(x, free, &zk));
            bounds.evals += 1;
            if eig.lambda_min() > bounds.lower {
                bounds.lower = eig.lambda_min();
                bounds.best_z = zk.clone();
            }
            if eig.values.len() <= k {
                break;
            }
            let lam0 = eig.values[0];
            let spread = eig.values[k - 1] - lam0;
            let island = eig.values[k] - eig.values[k - 1];
            if island <= spread {
                break; // cluster indistinct at this size
            }
            // rows: one equation per cluster block entry (p <= q)
            let rows = k * (k + 1) / 2;
            let mut jac: Vec<Vec<f64>> = vec![vec![0.0; free.len()]; rows];
            let mut recoalesce = vec![0.0; rows];
            let mut raise = vec![0.0; rows];
            let tbar: f64 = eig.values[..k].iter().sum::<f64>() / k as f64;
            let mut r = 0;
            for q in 0..k {
                for p in 0..=q {
                    for (f, &(i, j)) in free.iter().enumerate() {
                        jac[r][f] = eig.vectors.get(i, p) * eig.vectors.get(j, q)
                            + eig.vectors.get(j, p) * eig.vectors.get(i, q);
                    }
                    // the current block is diagonal in the eigenbasis
                    if p == q {
                        recoalesce[r] = tbar - eig.values[p];
                        raise[r] = 1.0;
                    }
                    r += 1;
                }
            }
            let mut gram = SymMatrix::zeros(rows);
            for a in 0..rows {
                for b in a..rows {
                    gram.set(a, b, dot(&jac[a], &jac[b]));
                }
            }
            let geig = sym_eigen(&gram);
            let cut = 1e-13 * gram.max_abs().max(1e-300);
            let apply = |mul: &[f64]| -> Vec<f64> {
                let mut dz = vec![0.0; free.len()];
                for (a, row) in jac.iter().enumerate() {
                    for (d, c) in dz.iter_mut().zip(row) {
                        *d += mul[a] * c;
                    }
                }
                dz
            };
            let dz0 = apply(&pinv_apply(&geig, &recoalesce, cut));
            let dz1 = apply(&pinv_apply(&geig, &raise, cut));
            // try to raise the coalesced level into the island gap
            let mut accepted = false;
            if dot(&dz1, &dz1).sqrt() > 1e-14 {
                let mut dt = 0.45 * island;
                for _ in 0..8 {
                    if bounds.evals >= MARGIN_EVAL_CAP {
                        break;
                    }
                    let trial: Vec<f64> = zk
                        .iter()
                        .zip(dz0.iter().zip(&dz1))
                        .map(|(a, (r0, r1))| a + r0 + dt * r1)
                        .collect();
                    let te = sym_eigen(&assemble(x, free, &trial));
                    bounds.evals += 1;
                    if te.lambda_min() > bounds.lower {
                        bounds.lower = te.lambda_min();
                        bounds.best_z = trial.clone();
                    }
                    if te.lambda_min() > lam0 + 0.2 * dt {
                        zk = trial;
                        accepted = true;
                        break;
                    }
                    dt *= 0.35;
                }
            }
            if accepted {
                stalls = 0;
            } else {
                // no level gain: plain recoalescing step, then re-certify
                let trial: Vec<f64> = zk.iter().zip(&dz0).map(|(a, d)| a + d).collect();
                let te = sym_eigen(&assemble(x, free, &trial));
                bounds.evals += 1;
                if te.lambda_min() > bounds.lower {
                    bounds.lower = te.lambda_min();
                    bounds.best_z = trial.clone();
                }
                let tspread = te.values[k - 1] - te.values[0];
                if tspread < 0.5 * spread || te.lambda_min() >= lam0 {
                    zk = trial;
                }
                if tspread >= 0.5 * spread {
                    stalls += 1;
                }
                refine_upper(x, free, &zk, bounds);
                if stalls >= 2 {
                    break;
                }
            }
        }
        refine_upper(x, free, &zk, bounds);
        if bounds.upper - bounds.lower <= target {
            *z = zk;
            return;
        }
    }
}

/// Margin by smoothed minimum-eigenvalue ascent over the free entries with
/// Gibbs-state dual certificates; used for non-chordal patterns.
fn smoothed_margin(x: &PartialMatrix, tol: f64) -> MarginReport {
    let scale = margin_scale(x);
    let target = tol * scale;
    let free = free_pairs(x.graph());
    // sound for every pattern: any completion interlaces below each clique
    // block, so the worst block eigenvalue bounds the margin from above
    let clique_upper = x
        .graph()
        .maximal_cliques()
        .iter()
        .map(|c| sym_eigen(&x.clique_block(c)).lambda_min())
        .fold(f64::INFINITY, f64::min);
    let mut bounds = Bounds {
        lower: f64::NEG_INFINITY,
        best_z: vec![0.0; free.len()],
        upper: clique_upper,
        evals: 0,
    };
    if free.is_empty() {
        // fully specified matrix: the margin is its own minimum eigenvalue
        let m = x.zero_completion();
        let lam = sym_eigen(&m).lambda_min();
        return MarginReport {
            margin: lam,
            epsilon: -lam,
            witness: m,
            certified_tol: 1e-12 * scale,
            certified: true,
            iterations: 1,
            method: "smoothed-ascent".into(),
        };
    }
    let mut z = vec![0.0; free.len()];
    // smoothing schedule sized to the zero completion's spectral spread
    let spread = {
        let eig = sym_eigen(&x.zero_completion());
        (eig.values.last().copied().unwrap_or(0.0) - eig.lambda_min()).max(0.1 * scale)
    };
    let mut mu = 0.1 * spread;
    let mu_floor = (target / 64.0).max(1e-15 * scale);
    loop {
        ascend_stage(x, &free, &mut z, mu, target, &mut bounds);
        refine_upper(x, &free, &z, &mut bounds);
        if bounds.upper - bounds.lower <= target || bounds.evals >= MARGIN_EVAL_CAP {
            break;
        }
        if mu <= mu_floor {
            break;
        }
        mu = (mu * 0.1).max(mu_floor * 0.99);
    }
    // first-order ascent leaves the iterate ~√gap from a maximizer with a
    // multiple eigenvalue; alternate coalescing polish with short ascent
    // stages until the certificate closes or the budget runs out
    for _ in 0..3 {
        if bounds.upper - bounds.lower <= target || bounds.evals >= MARGIN_EVAL_CAP {
            break;
        }
        coalesce_polish(x, &free, &mut z, target, &mut bounds);
        if bounds.upper - bounds.lower <= target || bounds.evals >= MARGIN_EVAL_CAP {
            break;
        }
        ascend_stage(x, &free, &mut z, mu, target, &mut bounds);
        refine_upper(x, &free, &z, &mut bounds);
    }
    let witness = assemble(x, &free, &bounds.best_z);
    let gap = (bounds.upper - bounds.lower).max(1e-12 * scale);
    MarginReport {
        margin: bounds.upper,
        epsilon: -bounds.upper,
        witness,
        certified_tol: gap,
        certified: bounds.upper - bounds.lower <= target,
        iterations: bounds.evals,
        method: "smoothed-ascent".into(),
    }
}

/// Margin on a chordal pattern: exactly the worst maximal-clique block
/// eigenvalue (any completion interlaces below every block; the
/// max-determinant completion of the shifted matrix attains it).
fn chordal_margin(x: &PartialMatrix) -> Result<MarginReport> {
    let g = x.graph();
    let scale = margin_scale(x);
    let mut margin = f64::INFINITY;
    for clique in g.maximal_cliques() {
        let lam = sym_eigen(&x.clique_block(&clique)).lambda_min();
        if lam < margin {
            margin = lam;
        }
    }
    if !margin.is_finite() {
        margin = 0.0;
    }
    let mut witness = chordal_complete(&x.shifted(-margin))?;
    for i in 0..g.num_vertices() {
        witness.set(i, i, x.diag(i));
    }
    Ok(MarginReport {
        margin,
        epsilon: -margin,
        witness,
        certified_tol: 1e-8 * scale,
        certified: true,
        iterations: 0,
        method: "chordal-maxdet".into(),
    })
}

/// Largest minimum eigenvalue over all completions of `x`, with a witness
/// and a certified error bound. `tol` is relative to max(1, tr X).
pub fn completion_margin(x: &PartialMatrix, tol: f64) -> Result<MarginReport> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be positive"
        )));
    }
    if is_chordal(x.graph()) {
        chordal_margin(x)
    } else {
        Ok(smoothed_margin(x, tol))
    }
}

/// Additive distance of one matrix: the smallest t with X + t·I_G
/// completable, i.e. the negated margin.
pub fn eps_of_matrix(x: &PartialMatrix, tol: f64) -> Result<f64> {
    Ok(completion_margin(x, tol)?.epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

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

    /// Random connected chordal graph grown by attaching each new vertex to
    /// a random clique inside the existing neighborhood structure.
    fn random_chordal(n: usize, rng: &mut ChaCha8Rng) -> Graph {
        let mut edges = Vec::new();
        let mut cliques: Vec<Vec<usize>> = vec![vec![0]];
        for v in 1..n {
            let base = cliques.choose(rng).unwrap().clone();
            let keep = rng.gen_range(1..=base.len());
            let mut attach = base.clone();
            attach.shuffle(rng);
            attach.truncate(keep);
            for &u in &attach {
                edges.push((u.min(v), u.max(v)));
            }
            attach.push(v);
            attach.sort_unstable();
            cliques.push(attach);
        }
        Graph::new(n, &edges).unwrap()
    }

    fn extremal_o4() -> PartialMatrix {
        let g = Graph::cycle(4);
        PartialMatrix::new(g, vec![0.25; 4], vec![-0.25, 0.25, 0.25, 0.25]).unwrap()
    }

    #[test]
    fn chordal_fill_on_paths() {
        // all-ones path: the missing corner completes to 1 (rank-1)
        let path = Graph::path(3);
        let x = PartialMatrix::new(path.clone(), vec![1.0; 3], vec![1.0, 1.0]).unwrap();
        let m = chordal_complete(&x).unwrap();
        assert!((m.get(0, 2) - 1.0).abs() < 1e-12);

        // mixed signs: fill follows the product through the middle vertex
        let y = PartialMatrix::new(path.clone(), vec![1.0; 3], vec![1.0, -1.0]).unwrap();
        let m = chordal_complete(&y).unwrap();
        assert!((m.get(0, 2) + 1.0).abs() < 1e-12);

        // identity completes to the identity
        let id = PartialMatrix::identity(Graph::path(4));
        assert_eq!(chordal_complete(&id).unwrap(), SymMatrix::identity(4));
    }

    #[test]
    fn chordal_complete_rejects_bad_inputs() {
        let x = PartialMatrix::identity(Graph::cycle(4));
        assert!(matches!(chordal_complete(&x), Err(Error::NotChordal)));
        let path = Graph::path(3);
        let bad = PartialMatrix::new(path, vec![1.0; 3], vec![2.0, 0.0]).unwrap();
        assert!(matches!(
            chordal_complete(&bad),
            Err(Error::NotLocallyPsd { .. })
        ));
    }

    #[test]
    fn chordal_completions_of_gram_projections_are_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..30 {
            let n = rng.gen_range(3..=8);
            let g = random_chordal(n, &mut rng);
            let x =
                PartialMatrix::project(g, &random_gram(n, rng.gen_range(1..=3), &mut rng)).unwrap();
            let scale = x.trace().max(1.0);
            let m = chordal_complete(&x).unwrap();
            assert!(sym_eigen(&m).lambda_min() >= -1e-8 * scale);
            // completion agrees with the input exactly
            for (e, &(i, j)) in x.graph().edges().iter().enumerate() {
                assert_eq!(m.get(i, j), x.offdiag()[e]);
            }
            for i in 0..x.graph().num_vertices() {
                assert_eq!(m.get(i, i), x.diag(i));
            }
        }
    }

    #[test]
    fn identity_margin_is_one() {
        for g in [Graph::path(4), Graph::cycle(4), Graph::petersen()] {
            let x = PartialMatrix::identity(g);
            let r = completion_margin(&x, 1e-7).unwrap();
            assert!(r.certified, "method {}", r.method);
            assert!((r.margin - 1.0).abs() < 1e-6, "margin {}", r.margin);
            assert!((r.epsilon + 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn extremal_cycle_matrix_matches_the_closed_form() {
        let r = completion_margin(&extremal_o4(), 1e-8).unwrap();
        let expect = -0.25 * (2.0_f64.sqrt() - 1.0);
        assert!(r.certified);
        assert!(
            (r.margin - expect).abs() < 1e-7,
            "margin {} vs {expect}",
            r.margin
        );
        // witness invariant
        let lam = sym_eigen(&r.witness).lambda_min();
        assert!(lam >= r.margin - r.certified_tol);
        assert_eq!(r.method, "smoothed-ascent");
    }

    #[test]
    fn chordal_margin_equals_worst_clique_eigenvalue() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(3..=7);
            let g = random_chordal(n, &mut rng);
            let mut x = PartialMatrix::project(g.clone(), &random_gram(n, 2, &mut rng)).unwrap();
            // random diagonal shift so margins take both signs
            let shift = rng.gen_range(-0.5..0.5);
            x = x.shifted(shift);
            let r = completion_margin(&x, 1e-7).unwrap();
            let worst = g
                .maximal_cliques()
                .iter()
                .map(|c| sym_eigen(&x.clique_block(c)).lambda_min())
                .fold(f64::INFINITY, f64::min);
            assert!((r.margin - worst).abs() < 1e-10);
            let lam = sym_eigen(&r.witness).lambda_min();
            assert!(lam >= r.margin - r.certified_tol);
        }
    }

    /// Golden-section maximization of a concave function on [lo, hi].
    fn golden_max(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
        let mut c = hi - phi * (hi - lo);
        let mut d = lo + phi * (hi - lo);
        let (mut fc, mut fd) = (f(c), f(d));
        while hi - lo > 1e-10 {
            if fc >= fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - phi * (hi - lo);
                fc = f(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + phi * (hi - lo);
                fd = f(d);
            }
        }
        fc.max(fd)
    }

    #[test]
    fn margin_matches_single_entry_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..12 {
            let n = rng.gen_range(3..=5);
            // complete pattern minus one edge: exactly one free entry
            let (a, b) = {
                let a = rng.gen_range(0..n);
                let mut b = rng.gen_range(0..n);
                while b == a {
                    b = rng.gen_range(0..n);
                }
                (a.min(b), a.max(b))
            };
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if (i, j) != (a, b) {
                        edges.push((i, j));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            let x = PartialMatrix::project(g.clone(), &random_gram(n, 3, &mut rng)).unwrap();
            let r = completion_margin(&x, 1e-8).unwrap();
            let bound = x.trace().abs() + 2.0;
            let oracle = golden_max(-bound, bound, |t| {
                let mut m = x.zero_completion();
                m.set(a, b, t);
                sym_eigen(&m).lambda_min()
            });
            assert!(
                (r.margin - oracle).abs() < 1e-6,
                "margin {} vs oracle {oracle}",
                r.margin
            );
        }
    }

    #[test]
    fn smoothed_path_agrees_with_chordal_exactness() {
        // force the general engine onto chordal patterns and compare
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..8 {
            let n = rng.gen_range(3..=6);
            let g = random_chordal(n, &mut rng);
            let x = PartialMatrix::project(g.clone(), &random_gram(n, 2, &mut rng)).unwrap();
            let exact = chordal_margin(&x).unwrap();
            let smoothed = smoothed_margin(&x, 1e-7);
            assert!(smoothed.certified, "gap {}", smoothed.certified_tol);
            assert!(
                (smoothed.margin - exact.margin).abs() < 1e-5,
                "smoothed {} vs exact {}",
                smoothed.margin,
                exact.margin
            );
        }
    }

    #[test]
    fn shift_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..6 {
            let g = if rng.gen_bool(0.5) {
                Graph::cycle(5)
            } else {
                random_chordal(5, &mut rng)
            };
            let x = PartialMatrix::project(g.clone(), &random_gram(5, 2, &mut rng)).unwrap();
            let c = rng.gen_range(-1.0..1.0);
            let r0 = completion_margin(&x, 1e-7).unwrap();
            let r1 = completion_margin(&x.shifted(c), 1e-7).unwrap();
            let slack = 2.0 * (r0.certified_tol + r1.certified_tol);
            assert!(
                (r1.margin - (r0.margin + c)).abs() <= slack + 1e-9,
                "margin {} vs {} + {c}",
                r1.margin,
                r0.margin
            );
        }
    }

    #[test]
    fn restriction_never_increases_epsilon() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..6 {
            let g = Graph::cycle(6);
            let x = PartialMatrix::project(g.clone(), &random_gram(6, 2, &mut rng)).unwrap();
            let full = completion_margin(&x, 1e-6).unwrap();
            let s: Vec<usize> = (0..6).filter(|_| rng.gen_bool(0.7)).collect();
            if s.len() < 2 {
                continue;
            }
            let sub = completion_margin(&x.restrict(&s).unwrap(), 1e-6).unwrap();
            assert!(
                sub.epsilon <= full.epsilon + 2.0 * (full.certified_tol + sub.certified_tol),
                "restriction epsilon {} vs {}",
                sub.epsilon,
                full.epsilon
            );
        }
    }

    #[test]
    fn epsilon_of_matrix_examples() {
        let g = Graph::cycle(4);
        assert!(
            (eps_of_matrix(&PartialMatrix::identity(g.clone()), 1e-7).unwrap() + 1.0).abs() < 1e-6
        );
        // projection of a rank-1 PSD matrix is completable
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let x = PartialMatrix::project(g, &random_gram(4, 1, &mut rng)).unwrap();
        assert!(eps_of_matrix(&x, 1e-7).unwrap() <= 1e-6);
    }

    #[test]
    fn epsilon_is_convex_along_segments() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let g = Graph::cycle(5);
        for _ in 0..5 {
            let x = PartialMatrix::project(g.clone(), &random_gram(5, 2, &mut rng)).unwrap();
            let y = PartialMatrix::project(g.clone(), &random_gram(5, 2, &mut rng)).unwrap();
            let t: f64 = rng.gen_range(0.0..1.0);
            let mix = PartialMatrix::new(
                g.clone(),
                x.diagonal()
                    .iter()
                    .zip(y.diagonal())
                    .map(|(a, b)| t * a + (1.0 - t) * b)
                    .collect(),
                x.offdiag()
                    .iter()
                    .zip(y.offdiag())
                    .map(|(a, b)| t * a + (1.0 - t) * b)
                    .collect(),
            )
            .unwrap();
            let (rx, ry, rm) = (
                completion_margin(&x, 1e-7).unwrap(),
                completion_margin(&y, 1e-7).unwrap(),
                completion_margin(&mix, 1e-7).unwrap(),
            );
            let slack = 3.0 * (rx.certified_tol + ry.certified_tol + rm.certified_tol);
            assert!(rm.epsilon <= t * rx.epsilon + (1.0 - t) * ry.epsilon + slack + 1e-9);
        }
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let x = PartialMatrix::identity(Graph::path(3));
        assert!(completion_margin(&x, 0.0).is_err());
        assert!(completion_margin(&x, -1.0).is_err());
    }
}
