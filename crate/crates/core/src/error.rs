use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed json: {0}")]
    Json(String),

    #[error("edge {u}-{v} has non-positive length {length}")]
    NonPositiveLength { u: String, v: String, length: f64 },

    #[error("self loop on vertex {0}")]
    SelfLoop(String),

    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: String, v: String },

    #[error("graph is disconnected: vertex {0} is not reachable")]
    Disconnected(String),

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("vertex id {0} out of range")]
    VertexOutOfRange(usize),

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("triangle inequality violated: d({a},{c}) = {direct} > {detour}")]
    TriangleViolation {
        a: usize,
        c: usize,
        direct: f64,
        detour: f64,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("spanning tree count {estimate:.3e} exceeds cap {cap}")]
    TooManySpanningTrees { estimate: f64, cap: u64 },

    #[error("invalid set cover instance: {0}")]
    InvalidInstance(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable snake_case name of the variant, for machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Json(_) => "json",
            Error::NonPositiveLength { .. } => "non_positive_length",
            Error::SelfLoop(_) => "self_loop",
            Error::DuplicateEdge { .. } => "duplicate_edge",
            Error::Disconnected(_) => "disconnected",
            Error::EmptyGraph => "empty_graph",
            Error::VertexOutOfRange(_) => "vertex_out_of_range",
            Error::UnknownVertex(_) => "unknown_vertex",
            Error::NotATree(_) => "not_a_tree",
            Error::InvalidAllocation(_) => "invalid_allocation",
            Error::InvalidMetric(_) => "invalid_metric",
            Error::TriangleViolation { .. } => "triangle_violation",
            Error::Degenerate(_) => "degenerate",
            Error::TooManySpanningTrees { .. } => "too_many_spanning_trees",
            Error::InvalidInstance(_) => "invalid_instance",
            Error::InvalidCover(_) => "invalid_cover",
            Error::InvalidConfig(_) => "invalid_config",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
