//! JSON wire formats shared by the library and the command line.
//!
//! - graph: `{"num_vertices": n, "edges": [[i, j], ...]}` with `i < j`
//! - multidigraph: `{"num_vertices": n, "arcs": [{"tail": t, "head": h}, ...]}`
//! - thickening: `{"base": <multidigraph>, "pieces": [{"arc": k, "graph": <graph>, "T": v, "H": w}, ...]}`
//! - partial matrix: `{"graph": <graph or path>, "diagonal": [...], "offdiag": [[i, j, value], ...]}`
//! - cochain: `{"graph_file": <graph or path>, "ones": [[i, j], ...]}`
//!
//! A graph referenced from a matrix or cochain file may be inline or a path
//! string, resolved relative to the referring file's directory.

use crate::cohomology::Cochain;
use crate::graph::Graph;
use crate::linalg::SymMatrix;
use crate::matrix::PartialMatrix;
use crate::thicken::{Multidigraph, Piece, ThickenedSpec};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphDoc {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphDoc {
    fn of(g: &Graph) -> GraphDoc {
        GraphDoc {
            num_vertices: g.num_vertices(),
            edges: g.edges().to_vec(),
        }
    }

    fn build(&self) -> Result<Graph> {
        let mut seen = std::collections::HashSet::new();
        for &(i, j) in &self.edges {
            if i >= j {
                return Err(Error::InvalidGraph(format!(
                    "edge [{i}, {j}] must be listed with i < j"
                )));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidGraph(format!("edge [{i}, {j}] listed twice")));
            }
        }
        Graph::new(self.num_vertices, &self.edges)
    }
}

/// Inline graph object or a path string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum GraphRef {
    Path(String),
    Inline(GraphDoc),
}

impl GraphRef {
    fn load(&self, base_dir: &Path) -> Result<Graph> {
        match self {
            GraphRef::Path(p) => read_graph(base_dir.join(p)),
            GraphRef::Inline(doc) => doc.build(),
        }
    }
}

pub fn graph_to_json(g: &Graph) -> String {
    serde_json::to_string_pretty(&GraphDoc::of(g)).expect("plain data serializes")
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    doc.build()
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    graph_from_json(&fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ArcDoc {
    tail: usize,
    head: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MultidigraphDoc {
    num_vertices: usize,
    arcs: Vec<ArcDoc>,
}

impl MultidigraphDoc {
    fn of(m: &Multidigraph) -> MultidigraphDoc {
        MultidigraphDoc {
            num_vertices: m.num_vertices(),
            arcs: m
                .arcs()
                .iter()
                .map(|&(tail, head)| ArcDoc { tail, head })
                .collect(),
        }
    }

    fn build(&self) -> Result<Multidigraph> {
        let arcs: Vec<(usize, usize)> = self.arcs.iter().map(|a| (a.tail, a.head)).collect();
        Multidigraph::new(self.num_vertices, &arcs)
    }
}

pub fn multidigraph_to_json(m: &Multidigraph) -> String {
    serde_json::to_string_pretty(&MultidigraphDoc::of(m)).expect("plain data serializes")
}

pub fn multidigraph_from_json(text: &str) -> Result<Multidigraph> {
    let doc: MultidigraphDoc = serde_json::from_str(text)?;
    doc.build()
}

pub fn read_multidigraph(path: impl AsRef<Path>) -> Result<Multidigraph> {
    multidigraph_from_json(&fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PieceDoc {
    arc: usize,
    graph: GraphDoc,
    #[serde(rename = "T")]
    t: usize,
    #[serde(rename = "H")]
    h: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ThickenedSpecDoc {
    base: MultidigraphDoc,
    pieces: Vec<PieceDoc>,
}

pub fn thickened_spec_to_json(spec: &ThickenedSpec) -> String {
    let doc = ThickenedSpecDoc {
        base: MultidigraphDoc::of(&spec.base),
        pieces: spec
            .pieces
            .iter()
            .enumerate()
            .map(|(arc, p)| PieceDoc {
                arc,
                graph: GraphDoc::of(&p.graph),
                t: p.t,
                h: p.h,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

pub fn thickened_spec_from_json(text: &str) -> Result<ThickenedSpec> {
    let doc: ThickenedSpecDoc = serde_json::from_str(text)?;
    let base = doc.base.build()?;
    let num_arcs = base.arcs().len();
    let mut slots: Vec<Option<Piece>> = vec![None; num_arcs];
    for pd in &doc.pieces {
        if pd.arc >= num_arcs {
            return Err(Error::InvalidThickening(format!(
                "piece references arc {} but the base has {num_arcs} arcs",
                pd.arc
            )));
        }
        if slots[pd.arc].is_some() {
            return Err(Error::InvalidThickening(format!(
                "two pieces reference arc {}",
                pd.arc
            )));
        }
        slots[pd.arc] = Some(Piece::new(pd.graph.build()?, pd.t, pd.h)?);
    }
    let mut pieces = Vec::with_capacity(num_arcs);
    for (arc, slot) in slots.into_iter().enumerate() {
        match slot {
            Some(p) => pieces.push(p),
            None => {
                return Err(Error::InvalidThickening(format!("no piece for arc {arc}")));
            }
        }
    }
    ThickenedSpec::new(base, pieces)
}

pub fn read_thickened_spec(path: impl AsRef<Path>) -> Result<ThickenedSpec> {
    thickened_spec_from_json(&fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PartialMatrixDoc {
    graph: GraphRef,
    diagonal: Vec<f64>,
    offdiag: Vec<(usize, usize, f64)>,
}

pub fn partial_matrix_to_json(x: &PartialMatrix) -> String {
    let g = x.graph();
    let doc = PartialMatrixDoc {
        graph: GraphRef::Inline(GraphDoc::of(g)),
        diagonal: (0..g.num_vertices()).map(|i| x.diag(i)).collect(),
        offdiag: g
            .edges()
            .iter()
            .zip(x.offdiag())
            .map(|(&(i, j), &v)| (i, j, v))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

/// Parse a partial matrix; `base_dir` anchors a relative graph path.
/// Every edge of the graph must receive exactly one off-diagonal value.
pub fn partial_matrix_from_json(text: &str, base_dir: &Path) -> Result<PartialMatrix> {
    let doc: PartialMatrixDoc = serde_json::from_str(text)?;
    let g = doc.graph.load(base_dir)?;
    if doc.diagonal.len() != g.num_vertices() {
        return Err(Error::InvalidMatrix(format!(
            "{} diagonal values for {} vertices",
            doc.diagonal.len(),
            g.num_vertices()
        )));
    }
    let mut x = PartialMatrix::zero(g.clone());
    for (i, &v) in doc.diagonal.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::InvalidMatrix(format!(
                "diagonal entry {i} is not finite"
            )));
        }
        x.set_diag(i, v);
    }
    let mut seen = vec![false; g.num_edges()];
    for &(i, j, v) in &doc.offdiag {
        if !v.is_finite() {
            return Err(Error::InvalidMatrix(format!(
                "value at edge ({i}, {j}) is not finite"
            )));
        }
        let e = edge_position(&g, i, j).ok_or_else(|| {
            Error::InvalidMatrix(format!("({i}, {j}) is not an edge of the graph"))
        })?;
        if seen[e] {
            return Err(Error::InvalidMatrix(format!(
                "edge ({i}, {j}) listed twice"
            )));
        }
        seen[e] = true;
        x.set_edge(i, j, v)?;
    }
    if let Some(k) = seen.iter().position(|&s| !s) {
        let (i, j) = g.edges()[k];
        return Err(Error::InvalidMatrix(format!(
            "edge ({i}, {j}) missing from offdiag"
        )));
    }
    Ok(x)
}

pub fn read_partial_matrix(path: impl AsRef<Path>) -> Result<PartialMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    partial_matrix_from_json(&text, base)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CochainDoc {
    graph_file: GraphRef,
    ones: Vec<(usize, usize)>,
}

pub fn cochain_to_json(g: &Graph, c: &Cochain) -> String {
    let doc = CochainDoc {
        graph_file: GraphRef::Inline(GraphDoc::of(g)),
        ones: c.ones_edges(g),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

/// Parse a cochain together with the graph it lives on.
pub fn cochain_from_json(text: &str, base_dir: &Path) -> Result<(Graph, Cochain)> {
    let doc: CochainDoc = serde_json::from_str(text)?;
    let g = doc.graph_file.load(base_dir)?;
    let mut c = Cochain::zero(g.num_edges());
    for &(i, j) in &doc.ones {
        let e = edge_position(&g, i, j).ok_or_else(|| {
            Error::InvalidCochain(format!("({i}, {j}) is not an edge of the graph"))
        })?;
        if c.get(e) {
            return Err(Error::InvalidCochain(format!(
                "edge ({i}, {j}) listed twice"
            )));
        }
        c.set(e, true);
    }
    Ok((g, c))
}

pub fn read_cochain(path: impl AsRef<Path>) -> Result<(Graph, Cochain)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    cochain_from_json(&text, base)
}

/// Dense row-major image of a symmetric matrix, for report payloads.
pub fn sym_matrix_rows(m: &SymMatrix) -> Vec<Vec<f64>> {
    (0..m.n)
        .map(|i| (0..m.n).map(|j| m.get(i, j)).collect())
        .collect()
}

fn edge_position(g: &Graph, i: usize, j: usize) -> Option<usize> {
    let key = (i.min(j), i.max(j));
    g.edges().binary_search(&key).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graphs_round_trip_and_reject_malformed_edges() {
        let g = Graph::petersen();
        let back = graph_from_json(&graph_to_json(&g)).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert_eq!(back.num_vertices(), g.num_vertices());

        let swapped = r#"{"num_vertices": 3, "edges": [[1, 0]]}"#;
        assert!(graph_from_json(swapped).is_err());
        let duplicated = r#"{"num_vertices": 3, "edges": [[0, 1], [0, 1]]}"#;
        assert!(graph_from_json(duplicated).is_err());
        let loops = r#"{"num_vertices": 3, "edges": [[1, 1]]}"#;
        assert!(graph_from_json(loops).is_err());
        assert!(graph_from_json("{").is_err());
    }

    #[test]
    fn thickened_specs_round_trip_with_pieces_keyed_by_arc() {
        let base = Multidigraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let spec =
            ThickenedSpec::new(base, vec![Piece::edge(), Piece::path(3), Piece::path(2)]).unwrap();
        let text = thickened_spec_to_json(&spec);
        let back = thickened_spec_from_json(&text).unwrap();
        assert_eq!(back, spec);

        // piece order in the file must not matter, only the arc key
        let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        doc["pieces"].as_array_mut().unwrap().reverse();
        let back = thickened_spec_from_json(&doc.to_string()).unwrap();
        assert_eq!(back, spec);

        doc["pieces"][0]["arc"] = serde_json::json!(1);
        assert!(thickened_spec_from_json(&doc.to_string()).is_err());
    }

    #[test]
    fn partial_matrices_require_every_edge_exactly_once() {
        let g = Graph::cycle(4);
        let mut x = PartialMatrix::identity(g);
        x.set_edge(0, 1, -0.5).unwrap();
        let text = partial_matrix_to_json(&x);
        let back = partial_matrix_from_json(&text, Path::new(".")).unwrap();
        assert_eq!(back, x);

        let missing = r#"{
            "graph": {"num_vertices": 3, "edges": [[0, 1], [1, 2]]},
            "diagonal": [1.0, 1.0, 1.0],
            "offdiag": [[0, 1, 0.5]]
        }"#;
        let err = partial_matrix_from_json(missing, Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("missing"));

        let doubled = r#"{
            "graph": {"num_vertices": 3, "edges": [[0, 1], [1, 2]]},
            "diagonal": [1.0, 1.0, 1.0],
            "offdiag": [[0, 1, 0.5], [1, 0, 0.5], [1, 2, 0.0]]
        }"#;
        assert!(partial_matrix_from_json(doubled, Path::new(".")).is_err());

        let off_graph = r#"{
            "graph": {"num_vertices": 3, "edges": [[0, 1], [1, 2]]},
            "diagonal": [1.0, 1.0, 1.0],
            "offdiag": [[0, 2, 0.5], [0, 1, 0.5], [1, 2, 0.0]]
        }"#;
        assert!(partial_matrix_from_json(off_graph, Path::new(".")).is_err());
    }

    #[test]
    fn matrix_graphs_load_from_a_relative_path() {
        let dir = std::env::temp_dir().join(format!("psdg-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("square.json"), graph_to_json(&Graph::cycle(4))).unwrap();
        let text = r#"{
            "graph": "square.json",
            "diagonal": [1.0, 1.0, 1.0, 1.0],
            "offdiag": [[0, 1, 0.1], [0, 3, 0.2], [1, 2, 0.3], [2, 3, 0.4]]
        }"#;
        let x = partial_matrix_from_json(text, &dir).unwrap();
        assert_eq!(x.edge_value(2, 3), Some(0.4));
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn cochains_round_trip_against_their_graph() {
        let g = Graph::cycle(5);
        let mut c = Cochain::zero(5);
        c.set(0, true);
        c.set(3, true);
        let (g2, c2) = cochain_from_json(&cochain_to_json(&g, &c), Path::new(".")).unwrap();
        assert_eq!(g2.edges(), g.edges());
        assert_eq!(c2, c);

        let bad = r#"{
            "graph_file": {"num_vertices": 3, "edges": [[0, 1]]},
            "ones": [[0, 2]]
        }"#;
        assert!(cochain_from_json(bad, Path::new(".")).is_err());
    }

    #[test]
    fn multidigraphs_round_trip_preserving_arc_order() {
        let m = Multidigraph::new(3, &[(2, 0), (0, 1), (0, 1)]).unwrap();
        let back = multidigraph_from_json(&multidigraph_to_json(&m)).unwrap();
        assert_eq!(back.arcs(), m.arcs());
        assert!(
            multidigraph_from_json(r#"{"num_vertices": 2, "arcs": [{"tail": 0, "head": 2}]}"#)
                .is_err()
        );
    }

    #[test]
    fn dense_rows_mirror_the_symmetric_matrix() {
        let mut m = SymMatrix::zeros(2);
        m.set(0, 0, 1.0);
        m.set(0, 1, -2.0);
        m.set(1, 1, 3.0);
        assert_eq!(sym_matrix_rows(&m), vec![vec![1.0, -2.0], vec![-2.0, 3.0]]);
    }
}
