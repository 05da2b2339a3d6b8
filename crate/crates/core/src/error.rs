use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. Variant names are stable: the CLI
/// prints them verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("malformed edge on line {line}: {reason}")]
    MalformedEdge { line: usize, reason: String },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("edge repeats vertex {vertex}")]
    DuplicateVertexInEdge { vertex: u32 },
    #[error("duplicate edge {edge:?}")]
    DuplicateEdge { edge: Vec<u32> },
    #[error("header declares {declared} edges but {found} were read")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("edge probability {0} is not in [0, 1]")]
    InvalidProbability(f64),
    #[error("clique order {s} is below the uniformity {k}")]
    InvalidOrder { s: usize, k: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("trial count must be positive")]
    InvalidTrialCount,
    #[error("not found: {0}")]
    NotFound(String),
    #[error("budget of {budget} exceeded: {what}")]
    BudgetExceeded { budget: u64, what: String },
    #[error("need at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("trace does not match hypergraph: {0}")]
    TraceMismatch(String),
    #[error("witness verification failed: clique {clique:?} found")]
    WitnessVerificationFailed { clique: Vec<u32> },
    #[error("instance too large for exhaustive or indexed search: {0}")]
    InfeasibleSize(String),
    #[error("no n <= {n_max} satisfies the threshold")]
    NotFoundWithinRange { n_max: usize },
}

impl Error {
    /// Bare variant name, e.g. `"DuplicateEdge"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::MalformedHeader(_) => "MalformedHeader",
            Error::MalformedEdge { .. } => "MalformedEdge",
            Error::VertexOutOfRange { .. } => "VertexOutOfRange",
            Error::DuplicateVertexInEdge { .. } => "DuplicateVertexInEdge",
            Error::DuplicateEdge { .. } => "DuplicateEdge",
            Error::EdgeCountMismatch { .. } => "EdgeCountMismatch",
            Error::InvalidProbability(_) => "InvalidProbability",
            Error::InvalidOrder { .. } => "InvalidOrder",
            Error::InvalidParameters(_) => "InvalidParameters",
            Error::InvalidTrialCount => "InvalidTrialCount",
            Error::NotFound(_) => "NotFound",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::TooFewVertices(_) => "TooFewVertices",
            Error::TraceMismatch(_) => "TraceMismatch",
            Error::WitnessVerificationFailed { .. } => "WitnessVerificationFailed",
            Error::InfeasibleSize(_) => "InfeasibleSize",
            Error::NotFoundWithinRange { .. } => "NotFoundWithinRange",
        }
    }
}
