use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },

    #[error("graph6 short form supports at most 62 vertices, got {0}")]
    UnsupportedSize(usize),

    #[error("edge list parse error on line {line}: {reason}")]
    EdgeList { line: usize, reason: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("built-in enumeration is limited to n <= 8 (got n = {0}); feed larger corpora as graph6 input")]
    EnumerationScope(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("index {index} out of range for bound {bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("matrix has rank {actual}, needed at least {required}")]
    RankDeficient { required: usize, actual: usize },

    #[error("invalid random regime: {0}")]
    Regime(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("vector is not an equilibrium stress: {0}")]
    NotAStress(String),

    #[error("non-generic configuration: {0}")]
    Genericity(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("{context}: {message}")]
    Io { context: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
