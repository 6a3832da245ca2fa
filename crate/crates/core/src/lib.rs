//! Additive distance to PSD-completability over graph sparsity patterns.
//!
//! A partial symmetric matrix specifies the diagonal and the entries on the
//! edges of a graph `G`; the rest is free. This crate measures how far such
//! matrices can be from admitting a PSD completion: per-matrix completion
//! margins with two-sided certificates, the graph-level distances eps(G) and
//! eps_minus(G), structural upper bounds (chordality, series-parallel closed
//! form, clique sums, thickened-graph reduction, lengthening), GF(2) degree-1
//! cohomology of the clique complex, and the locally-rank-1 extreme-ray
//! machinery connecting the two.
//!
//! Modules:
//! - [`graph`]: graphs, vertex maps, cliques, paths, contraction, lengthening
//! - [`stats`]: chordality, chordal girth, treewidth, series-parallel tests
//! - [`thicken`]: multidigraphs, thickened graphs, special-edge reduction
//! - [`cohomology`]: GF(2) cochains, H^1 bases, pullbacks, surjectivity
//! - [`matrix`]: partial matrices, sign patterns, extreme class enumeration
//! - [`completion`]: chordal completion and certified completion margins
//! - [`epsilon`]: eps / eps_minus estimators and closed-form bounds
//! - [`io`]: JSON wire formats
//! - [`verify`]: the acceptance verification suite

pub mod cohomology;
pub mod completion;
pub mod epsilon;
mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod stats;
pub mod thicken;
pub mod verify;

pub use error::{Error, Result};
