//! Long paths and cycles in subgraphs of hypercubes and related product graphs.
//!
//! Every subgraph of the hypercube with minimum degree `d` contains a path of
//! length `2^d - 1` and a cycle of length `2^d`, and the same holds (with a
//! weaker exponent) for grids, tori and Cartesian products of bounded-degree
//! graphs. This crate turns the inductive existence proofs behind those bounds
//! into an ordered rule engine that *builds* the paths, and pairs every
//! construction with an exact longest-path oracle so each claimed bound can be
//! certified at desk scale.
//!
//! The main entry points:
//!
//! - [`host`] / [`subgraph`]: vertex model for `Q_n`, grid slabs, tori and
//!   products, plus explicit vertex/edge subgraph views.
//! - [`split`]: coordinate splitting of a subgraph into two connected sides,
//!   each vertex losing at most `k` neighbours.
//! - [`decompose`], [`limbs`], [`span`]: block–cutvertex decomposition and the
//!   anatomical vocabulary (endblocks, exit vertices, Body/Core, limbs, spans)
//!   the constructions are phrased in.
//! - [`constructor`]: the proof-guided builders ([`constructor::find_ab_path`],
//!   [`constructor::find_long_path_min_degree`], [`constructor::find_long_cycle`],
//!   [`constructor::find_long_path_general`]) returning certificates.
//! - [`oracle`]: exact longest path/cycle search, certificate validation, and
//!   degree peeling.
//! - [`lab`]: instance generators, the experiment runner and CSV/JSON output.
//!
//! See the `examples/` directory for runnable walkthroughs of each capability.

pub mod constructor;
pub mod decompose;
pub mod host;
pub mod lab;
pub mod limbs;
pub mod menger;
pub mod oracle;
pub mod span;
pub mod split;
pub mod subcube;
pub mod subgraph;

pub use host::{CubeVertex, HostGraph, HostKind, HostSpec};
pub use subgraph::SubgraphView;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid host spec: {0}")]
    InvalidHost(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("vertex not in graph: {0}")]
    MissingVertex(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A construction rule fired but its assembled path missed the bound and
    /// the bounded fallback search could not close the gap.
    #[error("construction gap: {0}")]
    ConstructionGap(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
