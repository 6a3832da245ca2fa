//! Command-line front end for `psdg-core`.
//!
//! Every subcommand prints exactly one run report to standard output, either
//! as JSON or flattened to `key,value` CSV rows. Exit codes: 0 success,
//! 1 verification failure, 2 input error, 3 numerics did not certify.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use psdg_core::cohomology::h1_basis;
use psdg_core::completion::{chordal_complete, completion_margin};
use psdg_core::epsilon::{
    bound_lengthening, bound_minus, eps_estimate, eps_minus_estimate, gw_ratio,
};
use psdg_core::graph::Graph;
use psdg_core::io;
use psdg_core::stats::graph_stats;
use psdg_core::thicken::{build_thickened, reduce_thickened};
use psdg_core::verify;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNCERTIFIED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "psdg",
    version,
    about = "PSD completability of partial matrices over graphs"
)]
struct Cli {
    /// Report format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Graph statistics, maximal cliques, and the cohomology dimension.
    Analyze {
        /// Graph JSON file.
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
    },
    /// Best certified completion margin of a partial matrix.
    Margin {
        /// Partial-matrix JSON file.
        #[arg(short = 'x', long = "matrix")]
        matrix: PathBuf,
        /// Certification tolerance, relative to max(1, trace).
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Maximum-determinant PSD completion on a chordal pattern.
    Complete {
        /// Partial-matrix JSON file.
        #[arg(short = 'x', long = "matrix")]
        matrix: PathBuf,
    },
    /// Certified lower bound (and structural upper bound) on the additive
    /// distance of a graph.
    Epsilon {
        /// Graph JSON file.
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
        /// Maximum number of matrix evaluations.
        #[arg(long, default_value_t = 200)]
        budget: usize,
        /// Random seed for the diagonal search.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Margin tolerance per evaluation.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Same search against the edge-block relaxation.
    EpsilonMinus {
        /// Graph JSON file.
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
        /// Maximum number of matrix evaluations.
        #[arg(long, default_value_t = 200)]
        budget: usize,
        /// Random seed for the diagonal search.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Margin tolerance per evaluation.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Structural bounds: edge-relaxation sandwich, lengthening table, and
    /// the rounding ratio they imply.
    Bounds {
        /// Graph JSON file.
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
        /// Largest subdivision factor tabulated (rows 2..=L; default 2..=4).
        #[arg(long = "lengthen")]
        lengthen: Option<usize>,
    },
    /// Build a thickened graph from a spec and reduce it to path pieces.
    Thicken {
        /// Thickened-spec JSON file.
        #[arg(short = 's', long = "spec")]
        spec: PathBuf,
    },
    /// Cohomology basis of a graph; optionally classify one cochain.
    Cohomology {
        /// Graph JSON file.
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
        /// Cochain JSON file to classify against the graph.
        #[arg(short = 'f', long = "cochain")]
        cochain: Option<PathBuf>,
    },
    /// Run a verification suite and report one pass/fail line per check.
    Verify {
        /// Which suite to run.
        #[arg(long, default_value = "all",
              value_parser = ["cycles", "thickened", "bounds", "cohomology", "all"])]
        suite: String,
        /// Random seed shared by all checks.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// The single object a run prints: what ran, on which file contents, and
/// what came out. Identical inputs, seed, and version reproduce `results`
/// bit for bit.
#[derive(Serialize)]
struct RunReport {
    command: String,
    /// Input path -> SHA-256 of the file bytes.
    inputs: BTreeMap<String, String>,
    results: Value,
    /// Elapsed seconds; fixed at 0.0 for `verify` so reports are comparable
    /// byte for byte.
    wall_time: f64,
    tool_version: String,
    seed: u64,
}

/// Everything a subcommand produces besides the input digests.
struct Outcome {
    results: Value,
    seed: u64,
    exit: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, String> {
    // The cap only needs validating: candidate evaluation is sequential, so
    // any nonnegative cap (0 = serial) is honored as-is.
    let _threads = parse_threads(std::env::var("PSDG_THREADS").ok().as_deref())?;
    let started = Instant::now();
    let mut inputs = BTreeMap::new();
    let outcome = dispatch(&cli.command, &mut inputs)?;
    let report = RunReport {
        command: command_name(&cli.command).to_string(),
        inputs,
        results: outcome.results,
        wall_time: if matches!(cli.command, Command::Verify { .. }) {
            0.0
        } else {
            started.elapsed().as_secs_f64()
        },
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: outcome.seed,
    };
    print_report(&report, cli.format);
    Ok(outcome.exit)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze { .. } => "analyze",
        Command::Margin { .. } => "margin",
        Command::Complete { .. } => "complete",
        Command::Epsilon { .. } => "epsilon",
        Command::EpsilonMinus { .. } => "epsilon-minus",
        Command::Bounds { .. } => "bounds",
        Command::Thicken { .. } => "thicken",
        Command::Cohomology { .. } => "cohomology",
        Command::Verify { .. } => "verify",
    }
}

fn dispatch(c: &Command, inputs: &mut BTreeMap<String, String>) -> Result<Outcome, String> {
    match c {
        Command::Analyze { graph } => cmd_analyze(&load_graph(graph, inputs)?),
        Command::Margin { matrix, tol } => cmd_margin(&load_matrix(matrix, inputs)?, *tol),
        Command::Complete { matrix } => cmd_complete(&load_matrix(matrix, inputs)?),
        Command::Epsilon {
            graph,
            budget,
            seed,
            tol,
        } => {
            let g = load_graph(graph, inputs)?;
            let est = eps_estimate(&g, *budget, *seed, *tol).map_err(|e| e.to_string())?;
            Ok(Outcome {
                results: to_value(&est),
                seed: *seed,
                exit: 0,
            })
        }
        Command::EpsilonMinus {
            graph,
            budget,
            seed,
            tol,
        } => {
            let g = load_graph(graph, inputs)?;
            let est = eps_minus_estimate(&g, *budget, *seed, *tol).map_err(|e| e.to_string())?;
            Ok(Outcome {
                results: to_value(&est),
                seed: *seed,
                exit: 0,
            })
        }
        Command::Bounds { graph, lengthen } => cmd_bounds(&load_graph(graph, inputs)?, *lengthen),
        Command::Thicken { spec } => cmd_thicken(spec, inputs),
        Command::Cohomology { graph, cochain } => {
            cmd_cohomology(&load_graph(graph, inputs)?, cochain.as_deref(), inputs)
        }
        Command::Verify { suite, seed } => {
            let report = verify::run_suite(suite, *seed).map_err(|e| e.to_string())?;
            let exit = if report.passed { 0 } else { EXIT_VERIFY_FAILED };
            Ok(Outcome {
                results: to_value(&report),
                seed: *seed,
                exit,
            })
        }
    }
}

fn cmd_analyze(g: &Graph) -> Result<Outcome, String> {
    let stats = graph_stats(g);
    let basis = h1_basis(g);
    let results = json!({
        "stats": stats,
        "maximal_cliques": g.maximal_cliques(),
        "h1_dimension": basis.dimension,
    });
    Ok(Outcome {
        results,
        seed: 0,
        exit: 0,
    })
}

fn cmd_margin(x: &psdg_core::matrix::PartialMatrix, tol: f64) -> Result<Outcome, String> {
    let report = completion_margin(x, tol).map_err(|e| e.to_string())?;
    let exit = if report.certified {
        0
    } else {
        EXIT_UNCERTIFIED
    };
    let results = json!({
        "margin": report.margin,
        "epsilon": report.epsilon,
        "certified": report.certified,
        "certified_tol": report.certified_tol,
        "iterations": report.iterations,
        "method": report.method,
        "witness": io::sym_matrix_rows(&report.witness),
    });
    Ok(Outcome {
        results,
        seed: 0,
        exit,
    })
}

fn cmd_complete(x: &psdg_core::matrix::PartialMatrix) -> Result<Outcome, String> {
    let m = chordal_complete(x).map_err(|e| e.to_string())?;
    let results = json!({
        "completion": io::sym_matrix_rows(&m),
        "lambda_min": psdg_core::linalg::lambda_min(&m),
    });
    Ok(Outcome {
        results,
        seed: 0,
        exit: 0,
    })
}

fn cmd_bounds(g: &Graph, lengthen: Option<usize>) -> Result<Outcome, String> {
    let (lo, hi) = bound_minus(g);
    let last = match lengthen {
        Some(l) if l < 2 => return Err(format!("--lengthen must be at least 2, got {l}")),
        Some(l) => l,
        None => 4,
    };
    let mut lengthening = Vec::new();
    if g.num_edges() > 0 {
        for ell in 2..=last {
            let bound = bound_lengthening(g, ell, hi).map_err(|e| e.to_string())?;
            lengthening.push(json!({ "ell": ell, "bound": bound }));
        }
    }
    let ratio_rows: Vec<Value> = [("eps_minus_lower", lo), ("eps_minus_upper", hi)]
        .iter()
        .map(|&(at, eps)| json!({ "at": at, "eps": eps, "ratio": gw_ratio(g.num_vertices(), eps) }))
        .collect();
    let results = json!({
        "bound_minus": { "lower": lo, "upper": hi },
        "lengthening": lengthening,
        "gw_ratio": ratio_rows,
    });
    Ok(Outcome {
        results,
        seed: 0,
        exit: 0,
    })
}

fn cmd_thicken(path: &Path, inputs: &mut BTreeMap<String, String>) -> Result<Outcome, String> {
    let text = read_input(path, inputs)?;
    let spec = io::thickened_spec_from_json(&text).map_err(|e| in_file(path, e))?;
    let built = build_thickened(&spec).map_err(|e| e.to_string())?;
    let reduction = if built.valid {
        let red = reduce_thickened(&spec).map_err(|e| e.to_string())?;
        json!({
            "graph": graph_value(&red.graph),
            "contractions": red.log.len(),
            "arc_path_lengths": red.pieces.iter().map(|p| p.graph.num_edges()).collect::<Vec<_>>(),
        })
    } else {
        Value::Null
    };
    let results = json!({
        "built": { "graph": graph_value(&built.graph), "valid": built.valid },
        "reduction": reduction,
    });
    Ok(Outcome {
        results,
        seed: 0,
        exit: 0,
    })
}

fn cmd_cohomology(
    g: &Graph,
    cochain: Option<&Path>,
    inputs: &mut BTreeMap<String, String>,
) -> Result<Outcome, String> {
    let basis = h1_basis(g);
    let reps: Vec<Vec<(usize, usize)>> = basis
        .quotient_reps
        .iter()
        .map(|c| c.ones_edges(g))
        .collect();
    let mut results = json!({
        "dimension": basis.dimension,
        "cocycle_rank": basis.cocycle_basis.len(),
        "coboundary_rank": basis.coboundary_basis.len(),
        "quotient_reps": reps,
    });
    if let Some(path) = cochain {
        let text = read_input(path, inputs)?;
        let (cg, c) =
            io::cochain_from_json(&text, parent_dir(path)).map_err(|e| in_file(path, e))?;
        if cg != *g {
            return Err(format!(
                "cochain in {} is defined on a different graph than -g",
                path.display()
            ));
        }
        let class = basis.classify(&c);
        results["cochain"] = json!({
            "ones": c.ones_edges(g),
            "is_cocycle": class.is_cocycle,
            "is_coboundary": class.is_coboundary,
            "is_nontrivial": class.is_nontrivial(),
            "class_coordinates": class.class_coordinates,
        });
    }
    Ok(Outcome {
        results,
        seed: 0,
        exit: 0,
    })
}

/// Reads a file, records its digest under the path as typed, and returns the
/// text.
fn read_input(path: &Path, inputs: &mut BTreeMap<String, String>) -> Result<String, String> {
    let bytes =
        std::fs::read(path).map_err(|e| format!("failed to read {}: {e}", path.display()))?;
    inputs.insert(path.display().to_string(), hex_sha256(&bytes));
    String::from_utf8(bytes).map_err(|_| format!("{} is not UTF-8", path.display()))
}

fn load_graph(path: &Path, inputs: &mut BTreeMap<String, String>) -> Result<Graph, String> {
    let text = read_input(path, inputs)?;
    io::graph_from_json(&text).map_err(|e| in_file(path, e))
}

fn load_matrix(
    path: &Path,
    inputs: &mut BTreeMap<String, String>,
) -> Result<psdg_core::matrix::PartialMatrix, String> {
    let text = read_input(path, inputs)?;
    io::partial_matrix_from_json(&text, parent_dir(path)).map_err(|e| in_file(path, e))
}

fn parent_dir(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

fn in_file(path: &Path, e: psdg_core::Error) -> String {
    format!("in {}: {e}", path.display())
}

fn hex_sha256(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

fn graph_value(g: &Graph) -> Value {
    json!({ "num_vertices": g.num_vertices(), "edges": g.edges() })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn parse_threads(raw: Option<&str>) -> Result<Option<usize>, String> {
    match raw {
        None => Ok(None),
        Some(s) => s
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| format!("PSDG_THREADS must be a nonnegative integer, got {s:?}")),
    }
}

/// Best-effort printing: a closed pipe (e.g. `| head`) stops the output
/// without panicking.
fn print_report(report: &RunReport, format: Format) {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let _ = match format {
        Format::Json => {
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(report).expect("report serializes")
            )
        }
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", &to_value(report), &mut rows);
            writeln!(out, "key,value").and_then(|()| {
                rows.iter()
                    .try_for_each(|(k, v)| writeln!(out, "{},{}", csv_escape(k), csv_escape(v)))
            })
        }
    };
}

/// Depth-first flattening of a JSON value into dotted-path rows. Objects
/// iterate in key order, so the row order is deterministic.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |suffix: &str| {
        if prefix.is_empty() {
            suffix.to_string()
        } else {
            format!("{prefix}.{suffix}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                flatten(&key(k), inner, out);
            }
        }
        Value::Array(items) => {
            for (i, inner) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), inner, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Number(n) => out.push((prefix.to_string(), n.to_string())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
