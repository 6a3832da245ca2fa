//! Self-verification suites: each check reproduces one governing fact of
//! the library at desk scale — closed forms, chordal exactness, reduction
//! invariance, brute-force oracles — and reports pass/fail together with
//! the measured quantities.  The command line exposes these as
//! `verify --suite <name>`; the acceptance tests run the same code.

use crate::cohomology::{
    coboundary, coboundary_potential, h1_basis, is_cocycle, Cochain, CohomologyBasis,
    SurjectivityMode,
};
use crate::completion::{chordal_complete, completion_margin};
use crate::epsilon::{
    bound_lengthening, bound_minus, eps_cycle_exact, eps_estimate, eps_estimate_thickened,
    eps_minus_estimate, verify_homo_bound,
};
use crate::graph::Graph;
use crate::linalg::{sym_eigen, SymMatrix};
use crate::matrix::{
    diagonal_congruence, from_sign_pattern, matrix_pullback, sign_pattern, PartialMatrix,
};
use crate::stats::{chordal_girth, is_chordal};
use crate::thicken::{build_thickened, reduce_thickened, Multidigraph, Piece, ThickenedSpec};
use crate::{Error, Result};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Outcome of one numbered check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of a named suite of checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

pub const SUITE_NAMES: &[&str] = &["cycles", "thickened", "bounds", "cohomology", "all"];

/// Check ids belonging to a suite.
pub fn suite_checks(suite: &str) -> Result<Vec<usize>> {
    match suite {
        "cycles" => Ok(vec![1, 10, 11]),
        "thickened" => Ok(vec![3, 6, 9]),
        "bounds" => Ok(vec![2, 4, 5]),
        "cohomology" => Ok(vec![7, 8]),
        "all" => Ok((1..=12).collect()),
        other => Err(Error::InvalidParameter(format!(
            "unknown suite '{other}' (expected one of {SUITE_NAMES:?})"
        ))),
    }
}

pub fn run_suite(suite: &str, seed: u64) -> Result<SuiteReport> {
    let ids = suite_checks(suite)?;
    let mut checks = Vec::with_capacity(ids.len());
    for id in ids {
        checks.push(run_check(id, seed)?);
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        suite: suite.into(),
        seed,
        passed,
        checks,
    })
}

/// Run one numbered check.  A check that raises an internal error fails
/// with the error message as its detail; only an unknown id is an `Err`.
pub fn run_check(id: usize, seed: u64) -> Result<CheckResult> {
    let (name, outcome) = match id {
        1 => ("cycle-closed-form", check_cycle_closed_form(seed)),
        2 => ("chordal-exactness", check_chordal_exactness(seed)),
        3 => ("thickening-invariance", check_thickening_invariance(seed)),
        4 => ("edge-relaxation-bounds", check_edge_relaxation_bounds(seed)),
        5 => ("lengthening-bound", check_lengthening_bound(seed)),
        6 => ("pullback-monotonicity", check_pullback_monotonicity(seed)),
        7 => ("cohomology-dimension-oracle", check_cohomology_oracle(seed)),
        8 => ("sign-pattern-classification", check_sign_patterns(seed)),
        9 => (
            "pullback-projection-spectrum",
            check_projection_spectrum(seed),
        ),
        10 => ("girth-floor", check_girth_floor(seed)),
        11 => ("margin-oracle", check_margin_oracle(seed)),
        12 => ("determinism", check_determinism(seed)),
        other => {
            return Err(Error::InvalidParameter(format!(
                "no check with id {other} (valid ids are 1..=12)"
            )))
        }
    };
    let (passed, detail) = match outcome {
        Ok(r) => r,
        Err(e) => (false, format!("internal error: {e}")),
    };
    Ok(CheckResult {
        id,
        name: name.into(),
        passed,
        detail,
    })
}

fn mix(seed: u64, salt: u64) -> u64 {
    seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn rng_for(seed: u64, check: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, check))
}

// ---------------------------------------------------------------------------
// 1. Search on cycles reproduces the secant closed form.

fn check_cycle_closed_form(seed: u64) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for len in 4..=9usize {
        let est = eps_estimate(&Graph::cycle(len), 20, mix(seed, len as u64), 1e-9)?;
        let exact = eps_cycle_exact(len)?;
        worst = worst.max((est.lower - exact).abs());
    }
    Ok((
        worst <= 1e-3,
        format!("max |lower - closed form| = {worst:.2e} over cycle lengths 4..=9"),
    ))
}

// ---------------------------------------------------------------------------
// 2. Chordal patterns complete exactly (margins and explicit completions).

fn check_chordal_exactness(seed: u64) -> Result<(bool, String)> {
    let mut rng = rng_for(seed, 2);
    let mut worst_margin = f64::INFINITY;
    let mut worst_completion = f64::INFINITY;
    for _ in 0..200 {
        let n = rng.gen_range(2..=10usize);
        let g = random_chordal(n, &mut rng);
        let rank = rng.gen_range(1..=n);
        let x = PartialMatrix::project(g, &random_gram(n, rank, &mut rng))?;
        let report = completion_margin(&x, 1e-9)?;
        worst_margin = worst_margin.min(report.margin);
        let completion = chordal_complete(&x)?;
        worst_completion = worst_completion.min(sym_eigen(&completion).lambda_min());
    }
    Ok((
        worst_margin >= -1e-6 && worst_completion >= -1e-8,
        format!(
            "200 random completable instances: min margin {worst_margin:.2e}, \
             min completion eigenvalue {worst_completion:.2e}"
        ),
    ))
}

// ---------------------------------------------------------------------------
// 3. The distance is invariant under thickening reduction.

fn check_thickening_invariance(seed: u64) -> Result<(bool, String)> {
    let mut rng = rng_for(seed, 3);
    let mut worst = 0.0f64;
    for k in 0..20u64 {
        let spec = random_cycle_spec(&mut rng);
        let red = reduce_thickened(&spec)?;
        let built = eps_estimate(&red.initial, 15, mix(seed, 300 + k), 1e-9)?;
        let reduced = eps_estimate(&red.graph, 15, mix(seed, 400 + k), 1e-9)?;
        worst = worst.max((built.lower - reduced.lower).abs());
    }
    let apex = eps_estimate_thickened(&apex_thickened_four_cycle(), 20, mix(seed, 333), 1e-9)?;
    let apex_err = (apex.lower - eps_cycle_exact(4)?).abs();
    Ok((
        worst <= 3e-3 && apex_err <= 1e-3,
        format!(
            "20 random reductions: max |built - reduced| = {worst:.2e}; \
             apexed square vs cycle value: {apex_err:.2e}"
        ),
    ))
}

// ---------------------------------------------------------------------------
// 4. Edge-relaxation distance respects the clique/treewidth sandwich.

fn check_edge_relaxation_bounds(seed: u64) -> Result<(bool, String)> {
    let mut worst_clique = 0.0f64;
    for n in 3..=5usize {
        let est = eps_minus_estimate(&Graph::complete(n), 15, mix(seed, n as u64), 1e-9)?;
        worst_clique = worst_clique.max((est.lower - (1.0 - 2.0 / n as f64)).abs());
    }
    let mut rng = rng_for(seed, 4);
    let mut violations = 0usize;
    let mut worst_slack = 0.0f64;
    for k in 0..20u64 {
        let n = rng.gen_range(3..=9usize);
        let p = rng.gen_range(0.3..0.8);
        let g = random_graph(n, p, &mut rng);
        let (lo, hi) = bound_minus(&g);
        let est = eps_minus_estimate(&g, 25, mix(seed, 40 + k), 1e-9)?;
        if est.lower < lo - 1e-3 || est.lower > hi + 1e-3 {
            violations += 1;
        }
        worst_slack = worst_slack.max((lo - est.lower).max(est.lower - hi));
    }
    Ok((
        worst_clique <= 1e-3 && violations == 0,
        format!(
            "cliques max |lower - (1-2/n)| = {worst_clique:.2e}; \
             20 random graphs, {violations} sandwich violations (worst slack {worst_slack:.2e})"
        ),
    ))
}

// ---------------------------------------------------------------------------
// 5. Subdividing edges attenuates the distance as the mixing formula says.

fn check_lengthening_bound(seed: u64) -> Result<(bool, String)> {
    let k4 = Graph::complete(4);
    let frozen = (bound_lengthening(&k4, 4, 0.5)? - 0.0469182).abs();
    let mut worst = f64::NEG_INFINITY;
    for (gi, g) in [k4, Graph::wheel(5)].iter().enumerate() {
        let e = bound_minus(g).1;
        for ell in 2..=4usize {
            let bound = bound_lengthening(g, ell, e)?;
            let lengthened = g.lengthen(ell)?;
            let est = eps_estimate(&lengthened, 6, mix(seed, (10 * gi + ell) as u64), 1e-9)?;
            worst = worst.max(est.lower - bound);
        }
    }
    Ok((
        frozen <= 1e-6 && worst <= 3e-3,
        format!(
            "estimate minus bound at most {worst:.2e} over 6 subdivisions; \
             reference arithmetic off by {frozen:.2e}"
        ),
    ))
}

// ---------------------------------------------------------------------------
// 6. Surjective-on-cohomology maps never decrease the distance.

fn check_pullback_monotonicity(seed: u64) -> Result<(bool, String)> {
    let mut failures = 0usize;
    let mut checked = 0usize;
    // cycle contractions, including the pentagon-to-square reference values
    let mut reference = true;
    for n in 5..=8usize {
        let (_, phi) = Graph::cycle(n).contract_edge(0, 1)?;
        let check = verify_homo_bound(
            &phi,
            SurjectivityMode::Exhaustive { cap: 16 },
            20,
            mix(seed, n as u64),
            1e-6,
        )?;
        checked += 1;
        if !check.holds {
            failures += 1;
        }
        if n == 5 {
            reference = (check.eps_domain - 0.0472136).abs() <= 1e-3
                && (check.eps_codomain - 0.1035534).abs() <= 1e-3;
        }
    }
    // reductions of random thickenings, certified structurally
    let mut rng = rng_for(seed, 6);
    for k in 0..6u64 {
        let spec = random_cycle_spec(&mut rng);
        let red = reduce_thickened(&spec)?;
        let check = verify_homo_bound(
            &red.map,
            SurjectivityMode::Structural { spec: &spec },
            15,
            mix(seed, 60 + k),
            1e-6,
        )?;
        checked += 1;
        if !check.holds {
            failures += 1;
        }
    }
    Ok((
        failures == 0 && reference,
        format!(
            "{checked} verified surjective maps, {failures} bound violations; \
             pentagon/square values match: {reference}"
        ),
    ))
}

// ---------------------------------------------------------------------------
// 7. Eliminated cohomology dimensions equal brute-force enumeration.

fn check_cohomology_oracle(seed: u64) -> Result<(bool, String)> {
    let mut mismatches = 0usize;
    let mut graphs = 0usize;
    // every graph on at most 5 vertices with at most 7 edges
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        for mask in 0..(1u32 << pairs.len()) {
            if mask.count_ones() > 7 {
                continue;
            }
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|&(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::new(n, &edges)?;
            graphs += 1;
            if h1_basis(&g).dimension != brute_h1_dimension(&g) {
                mismatches += 1;
            }
        }
    }
    // seeded sparse graphs on 6 and 7 vertices
    let mut rng = rng_for(seed, 7);
    for _ in 0..25 {
        let n = rng.gen_range(6..=7usize);
        let g = random_graph_with_max_edges(n, 7, &mut rng);
        graphs += 1;
        if h1_basis(&g).dimension != brute_h1_dimension(&g) {
            mismatches += 1;
        }
    }
    let petersen_ok = h1_basis(&Graph::petersen()).dimension == 6;
    let mut chordal_ok = true;
    for _ in 0..10 {
        let g = random_chordal(rng.gen_range(2..=8), &mut rng);
        chordal_ok &= h1_basis(&g).dimension == 0;
    }
    Ok((
        mismatches == 0 && petersen_ok && chordal_ok,
        format!(
            "{graphs} graphs against brute force, {mismatches} mismatches; \
             Petersen dimension 6: {petersen_ok}; chordal dimension 0: {chordal_ok}"
        ),
    ))
}

// ---------------------------------------------------------------------------
// 8. Sign patterns are cocycles and congruence shifts them by coboundaries.

fn check_sign_patterns(seed: u64) -> Result<(bool, String)> {
    let mut rng = rng_for(seed, 8);
    let mut bad = 0usize;
    for _ in 0..500 {
        let n = rng.gen_range(3..=8usize);
        let g = random_graph(n, rng.gen_range(0.4..0.8), &mut rng);
        let basis = h1_basis(&g);
        let class = random_cocycle(&basis, &mut rng);
        let support: Vec<usize> = (0..n).collect();
        let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(0.3..2.0)).collect();
        let x = from_sign_pattern(&g, &support, &class, &diag)?;

        let sp = sign_pattern(&x, 1e-9)?;
        if !is_cocycle(&sp.subgraph, &sp.cochain) || sp.cochain != class {
            bad += 1;
            continue;
        }
        // positive congruence: the pattern is untouched
        let dpos: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..3.0)).collect();
        if sign_pattern(&diagonal_congruence(&x, &dpos), 1e-9)?.cochain != class {
            bad += 1;
            continue;
        }
        // mixed-sign congruence: the pattern moves by exactly the coboundary
        // of the flipped vertex set
        let flips: Vec<bool> = (0..n).map(|_| rng.gen::<bool>()).collect();
        let dmix: Vec<f64> = dpos
            .iter()
            .zip(&flips)
            .map(|(&v, &f)| if f { -v } else { v })
            .collect();
        let mut shifted = sign_pattern(&diagonal_congruence(&x, &dmix), 1e-9)?.cochain;
        shifted.xor_assign(&class);
        if coboundary_potential(&g, &shifted).is_none() || shifted != coboundary(&g, &flips) {
            bad += 1;
        }
    }
    // classes violating the triangle condition must be rejected
    let mut rejected = true;
    for _ in 0..20 {
        let n = rng.gen_range(3..=6usize);
        let g = loop {
            let g = random_graph(n, 0.8, &mut rng);
            if !g.triangles().is_empty() {
                break g;
            }
        };
        let t = g.triangles()[0];
        let mut class = Cochain::zero(g.num_edges());
        let e = g
            .edges()
            .iter()
            .position(|&(a, b)| (a, b) == (t[0].min(t[1]), t[0].max(t[1])))
            .expect("triangle edge is present");
        class.set(e, true);
        let support: Vec<usize> = (0..n).collect();
        let diag = vec![1.0; n];
        if from_sign_pattern(&g, &support, &class, &diag).is_ok() {
            rejected = false;
        }
    }
    Ok((
        bad == 0 && rejected,
        format!(
            "500 patterns classified, {bad} anomalies; non-cocycle classes rejected: {rejected}"
        ),
    ))
}

// ---------------------------------------------------------------------------
// 9. Pulling the identity back along an edge contraction and rescaling per
//    the fiber masses yields an exact orthogonal projection.

fn check_projection_spectrum(seed: u64) -> Result<(bool, String)> {
    let mut rng = rng_for(seed, 9);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let g = loop {
            let g = random_graph(rng.gen_range(4..=9), 0.5, &mut rng);
            if g.num_edges() > 0 {
                break g;
            }
        };
        let n = g.num_vertices();
        let &(a, b) = g.edges().choose(&mut rng).expect("graph has an edge");
        let (h, phi) = g.contract_edge(a, b)?;

        let basis = h1_basis(&g);
        let class = random_cocycle(&basis, &mut rng);
        let support: Vec<usize> = (0..n).collect();
        let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(0.3..2.0)).collect();
        let x = from_sign_pattern(&g, &support, &class, &diag)?;

        let mut fiber_mass = vec![0.0f64; h.num_vertices()];
        for j in 0..n {
            fiber_mass[phi.apply(j)] += x.diag(j);
        }
        let d: Vec<f64> = (0..n)
            .map(|j| (x.diag(j) / fiber_mass[phi.apply(j)]).sqrt())
            .collect();
        let pulled = matrix_pullback(&phi, &PartialMatrix::identity(h.clone()));
        let z = diagonal_congruence(&pulled, &d).zero_completion();
        for v in sym_eigen(&z).values {
            worst = worst.max(v.min(1.0 - v).abs().min((v - 1.0).abs().min(v.abs())));
        }
    }
    Ok((
        worst <= 1e-9,
        format!(
            "20 rescaled pullbacks of the identity: eigenvalues within {worst:.2e} of {{0, 1}}"
        ),
    ))
}

// ---------------------------------------------------------------------------
// 10. Estimates never fall below the minimum induced cycle's value.

fn check_girth_floor(seed: u64) -> Result<(bool, String)> {
    let mut rng = rng_for(seed, 10);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..30u64 {
        let g = loop {
            let n = rng.gen_range(4..=10usize);
            let g = random_graph(n, rng.gen_range(0.3..0.7), &mut rng);
            if !is_chordal(&g) {
                break g;
            }
        };
        let girth = chordal_girth(&g).expect("non-chordal graphs have an induced cycle");
        let floor = eps_cycle_exact(girth)?;
        let est = eps_estimate(&g, 10, mix(seed, 100 + k), 1e-9)?;
        worst = worst.max(floor - est.lower);
    }
    Ok((
        worst <= 1e-3,
        format!("30 non-chordal graphs: floor exceeds lower bound by at most {worst:.2e}"),
    ))
}

// ---------------------------------------------------------------------------
// 11. Margins match a direct scan on single-unknown instances.

fn check_margin_oracle(seed: u64) -> Result<(bool, String)> {
    let mut rng = rng_for(seed, 11);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.gen_range(3..=5usize);
        let complete = Graph::complete(n);
        let drop = rng.gen_range(0..complete.num_edges());
        let (da, db) = complete.edges()[drop];
        let edges: Vec<(usize, usize)> = complete
            .edges()
            .iter()
            .copied()
            .filter(|&e| e != (da, db))
            .collect();
        let g = Graph::new(n, &edges)?;
        let x = PartialMatrix::project(g, &random_gram(n, n.max(2) - 1, &mut rng))?;

        let report = completion_margin(&x, 1e-9)?;
        let base = x.zero_completion();
        let reach = base.max_abs() + 1.0;
        let objective = |t: f64| {
            let mut m = base.clone();
            m.set(da, db, t);
            crate::linalg::lambda_min(&m)
        };
        let t_star = golden_max(-reach, reach, &objective);
        worst = worst.max((report.margin - objective(t_star)).abs());
    }
    Ok((
        worst <= 1e-6,
        format!("20 single-unknown instances: |margin - scanned optimum| at most {worst:.2e}"),
    ))
}

// ---------------------------------------------------------------------------
// 12. The same seed reproduces every reported number bit for bit.

fn check_determinism(seed: u64) -> Result<(bool, String)> {
    let a = representative_trace(seed)?;
    let b = representative_trace(seed)?;
    Ok((
        a == b,
        if a == b {
            format!("two runs produced identical {}-byte traces", a.len())
        } else {
            "replayed trace differs".into()
        },
    ))
}

fn representative_trace(seed: u64) -> Result<String> {
    let mut parts = Vec::new();
    let est = eps_estimate(&Graph::cycle(5), 15, seed, 1e-9)?;
    parts.push(serde_json::to_string(&est)?);
    let minus = eps_minus_estimate(&Graph::wheel(6), 15, mix(seed, 1), 1e-9)?;
    parts.push(serde_json::to_string(&minus)?);
    let thick = eps_estimate_thickened(&apex_thickened_four_cycle(), 15, mix(seed, 2), 1e-9)?;
    parts.push(serde_json::to_string(&thick)?);
    let mut rng = rng_for(seed, 12);
    let g = random_chordal(7, &mut rng);
    let x = PartialMatrix::project(g, &random_gram(7, 3, &mut rng))?;
    let report = completion_margin(&x, 1e-9)?;
    parts.push(format!(
        "{:x};{:x};{:?}",
        report.margin.to_bits(),
        report.epsilon.to_bits(),
        crate::io::sym_matrix_rows(&report.witness)
    ));
    Ok(parts.join("\n"))
}

// ---------------------------------------------------------------------------
// Shared fixtures and generators

/// Triangle glued on an arc: marked vertices adjacent, plus one apex.
fn apex_piece() -> Piece {
    Piece::new(
        Graph::new(3, &[(0, 1), (0, 2), (1, 2)]).expect("triangle"),
        0,
        1,
    )
    .expect("valid piece")
}

/// Two-edge path with a pendant vertex on its midpoint.
fn pendant_path_piece() -> Piece {
    Piece::new(
        Graph::new(4, &[(0, 1), (1, 2), (1, 3)]).expect("pendant path"),
        0,
        2,
    )
    .expect("valid piece")
}

/// A square base with one apexed arc: reduces to the plain four-cycle.
pub fn apex_thickened_four_cycle() -> ThickenedSpec {
    let base = Multidigraph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).expect("square base");
    ThickenedSpec::new(
        base,
        vec![apex_piece(), Piece::edge(), Piece::edge(), Piece::edge()],
    )
    .expect("valid spec")
}

/// Random valid thickening over a small cycle or parallel-arc base, with the
/// built graph capped at 12 vertices.
fn random_cycle_spec(rng: &mut ChaCha8Rng) -> ThickenedSpec {
    loop {
        let k = rng.gen_range(2..=4usize);
        let (n_base, arcs): (usize, Vec<(usize, usize)>) = if k == 2 {
            (2, vec![(0, 1), (0, 1)])
        } else {
            (k, (0..k).map(|i| (i, (i + 1) % k)).collect())
        };
        let pieces: Vec<Piece> = (0..k)
            .map(|_| match rng.gen_range(0..5u8) {
                0 => Piece::edge(),
                1 => Piece::path(2),
                2 => Piece::path(3),
                3 => apex_piece(),
                _ => pendant_path_piece(),
            })
            .collect();
        let built_size: usize = n_base
            + pieces
                .iter()
                .map(|p| p.graph.num_vertices() - 2)
                .sum::<usize>();
        if built_size > 12 {
            continue;
        }
        // all-adjacent pieces on short bases either collapse the cycle or
        // put a triangle across several arcs; re-roll those
        if pieces.iter().all(|p| p.marked_distance() == Some(1)) {
            continue;
        }
        let base = Multidigraph::new(n_base, &arcs).expect("cycle base");
        let spec = match ThickenedSpec::new(base, pieces) {
            Ok(s) => s,
            Err(_) => continue,
        };
        // Ok alone is not enough: a built graph may still have a triangle
        // straddling pieces, which the reduction rejects.
        if build_thickened(&spec).map_or(false, |b| b.valid) {
            return spec;
        }
    }
}

fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, &edges).expect("generated edges are in range")
}

fn random_graph_with_max_edges(n: usize, max_edges: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    pairs.shuffle(rng);
    pairs.truncate(rng.gen_range(0..=max_edges));
    Graph::new(n, &pairs).expect("generated edges are in range")
}

/// Simplicial-growth chordal graph: every new vertex attaches to a subset of
/// an existing clique.
fn random_chordal(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    let mut cliques: Vec<Vec<usize>> = vec![vec![0]];
    for v in 1..n {
        let base = cliques
            .choose(rng)
            .expect("clique list is nonempty")
            .clone();
        let keep = rng.gen_range(1..=base.len());
        let mut attach = base;
        attach.shuffle(rng);
        attach.truncate(keep);
        for &u in &attach {
            edges.push((u.min(v), u.max(v)));
        }
        attach.push(v);
        attach.sort_unstable();
        cliques.push(attach);
    }
    Graph::new(n, &edges).expect("simplicial growth yields valid edges")
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

fn random_cocycle(basis: &CohomologyBasis, rng: &mut ChaCha8Rng) -> Cochain {
    let mut c = Cochain::zero(basis.graph.num_edges());
    for b in &basis.cocycle_basis {
        if rng.gen::<bool>() {
            c.xor_assign(b);
        }
    }
    c
}

/// H¹ dimension by enumerating all cochains and all vertex-set coboundaries.
fn brute_h1_dimension(g: &Graph) -> usize {
    let m = g.num_edges();
    let n = g.num_vertices();
    assert!(m <= 20, "brute force is for small edge counts");
    let mut cocycles = 0usize;
    for mask in 0..(1u64 << m) {
        let mut c = Cochain::zero(m);
        for e in 0..m {
            c.set(e, mask >> e & 1 == 1);
        }
        if is_cocycle(g, &c) {
            cocycles += 1;
        }
    }
    let mut coboundaries = std::collections::HashSet::new();
    for mask in 0..(1u64 << n) {
        let ind: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        let c = coboundary(g, &ind);
        let mut bits = 0u64;
        for e in 0..m {
            if c.get(e) {
                bits |= 1 << e;
            }
        }
        coboundaries.insert(bits);
    }
    let log2 = |k: usize| -> usize {
        debug_assert!(k.is_power_of_two());
        k.trailing_zeros() as usize
    };
    log2(cocycles) - log2(coboundaries.len())
}

fn golden_max(mut lo: f64, mut hi: f64, f: &impl Fn(f64) -> f64) -> f64 {
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
    0.5 * (lo + hi)
}
