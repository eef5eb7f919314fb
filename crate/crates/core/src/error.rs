use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("item {id} out of range for a ground set of size {len}")]
    ItemOutOfRange { id: usize, len: usize },

    #[error("weight vector has length {got}, expected {expected}")]
    WeightLength { got: usize, expected: usize },

    /// A `u v` pair (1-based, as written on disk) that matches no edge.
    #[error("no edge between vertices {u} and {v}")]
    MissingEdge { u: usize, v: usize },

    #[error("infeasible instance: {0}")]
    Infeasible(String),

    #[error("solver returned an infeasible solution")]
    InfeasibleOutput,

    #[error("instance too large for the exact oracle ({0}); use a heuristic solver instead")]
    OracleGuard(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for failures of the algorithm or instance (as opposed to bad
    /// input files or arguments).
    pub fn is_solver_error(&self) -> bool {
        matches!(
            self,
            Error::Infeasible(_) | Error::InfeasibleOutput | Error::OracleGuard(_)
        )
    }
}
