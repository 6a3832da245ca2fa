use thiserror::Error;

/// Errors surfaced by the library. Input-shape problems and violated
/// preconditions are reported here; numeric non-convergence is not an error
/// (reports carry an explicit `certified` flag instead).
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {num_vertices} vertices")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },

    #[error("{0} is not an edge of the graph")]
    NotAnEdge(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid multidigraph: {0}")]
    InvalidMultidigraph(String),

    #[error("invalid thickening: {0}")]
    InvalidThickening(String),

    #[error("invalid vertex map: {0}")]
    InvalidVertexMap(String),

    #[error("invalid cochain: {0}")]
    InvalidCochain(String),

    #[error("not a cocycle: {0}")]
    NotACocycle(String),

    #[error("invalid partial matrix: {0}")]
    InvalidMatrix(String),

    #[error("graph is not chordal")]
    NotChordal,

    #[error("matrix is not locally PSD (clique {clique:?} has min eigenvalue {lambda_min:.3e})")]
    NotLocallyPsd { clique: Vec<usize>, lambda_min: f64 },

    #[error("cycle length {0} below 4 (shorter cycles are chordal)")]
    CycleTooShort(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("budget exhausted before any candidate was evaluated")]
    BudgetExhausted,

    #[error("surjectivity precondition unverified: {0}")]
    SurjectivityUnverified(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
