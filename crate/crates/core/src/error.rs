use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph too large: {n} vertices exceeds the {max} limit")]
    TooLarge { n: usize, max: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("pattern parse error: {0}")]
    PatternParse(String),

    #[error("graph6 parse error: {0}")]
    Graph6(String),

    #[error("edge {u}-{v} already present")]
    EdgeExists { u: usize, v: usize },

    #[error("input graph is not a tree")]
    NotATree,

    #[error("precondition refused: {0}")]
    Refused(String),

    #[error("structural guarantee violated: {0}")]
    TheoremViolation(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
