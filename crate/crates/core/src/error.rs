use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("({g}, {n}) is outside the stable range 2g - 2 + n > 0")]
    UnstablePair { g: u32, n: u32 },

    #[error("invalid dual graph: {0}")]
    InvalidGraph(String),

    #[error("graph of type ({g}, {n}) does not match the expected type ({expected_g}, {expected_n})")]
    TypeMismatch {
        g: u32,
        n: u32,
        expected_g: u32,
        expected_n: u32,
    },

    #[error("graph is not a member of the universe of type ({g}, {n})")]
    NotInUniverse { g: u32, n: u32 },

    #[error("edge index {index} out of range (graph has {count} edges)")]
    EdgeOutOfRange { index: usize, count: usize },

    #[error("vertex index {index} out of range (graph has {count} vertices)")]
    VertexOutOfRange { index: usize, count: usize },

    #[error("invalid vertex subset: {0}")]
    InvalidSubset(String),

    #[error("selection in graph {graph} is not invariant under its automorphisms")]
    NotOrbitClosed { graph: usize },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("malformed input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
