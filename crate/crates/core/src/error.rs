use thiserror::Error;

use crate::graph::VertexId;

/// Errors shared by all graph and topology operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    InvalidVertex(VertexId),

    #[error("unknown edge `{0}`-`{1}`")]
    InvalidEdge(VertexId, VertexId),

    #[error("level value {0} lies on a vertex value; pick a value outside the image of f")]
    LevelOnVertex(String),

    #[error("coloring is not locally injective: vertices `{0}` and `{1}` are adjacent with equal values")]
    NotLocallyInjective(VertexId, VertexId),

    #[error("coloring is missing a value for vertex `{0}`")]
    MissingValue(VertexId),

    #[error("not a manifold with boundary: unit sphere of `{vertex}` is neither a {dim}-sphere nor a {dim}-ball")]
    NotAManifoldWithBoundary { vertex: VertexId, dim: i32 },

    #[error("edge `{0}`-`{1}` is not refinable: {2}")]
    NotRefinableEdge(VertexId, VertexId, String),

    #[error("cartesian product with an empty factor is undefined")]
    EmptyFactor,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("search budget exhausted after {0} nodes")]
    BudgetExhausted(u64),

    #[error("internal construction invariant violated: {0}")]
    ConstructionBug(String),

    #[error("input is not a {0}-sphere: {1}")]
    NotASphere(i32, String),

    #[error("input is not a {0}-ball: {1}")]
    NotABall(i32, String),

    #[error("input is not a {0}-graph: {1}")]
    NotADGraph(i32, String),

    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("malformed coloring: {0}")]
    MalformedColoring(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
