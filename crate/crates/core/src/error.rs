use thiserror::Error;

/// Failures of the LP layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("malformed model: {0}")]
    MalformedModel(String),
    /// The pivot budget was exhausted, or the floating-point vertex failed
    /// re-verification and the exact path could not recover it.
    #[error("numerical failure after {pivots} pivots: {reason}")]
    NumericalFailure { pivots: usize, reason: String },
    #[error("cutting-plane round limit {rounds} exceeded (best bound {best_bound})")]
    RoundLimitExceeded { rounds: usize, best_bound: f64 },
    #[error("separation stalled after {rounds} rounds: oracle only returned rows already in the model")]
    SeparationStalled { rounds: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({u}, {v}) has invalid weight {weight}")]
    InvalidWeight { u: usize, v: usize, weight: f64 },
    #[error("source and sink coincide ({0})")]
    SameTerminals(usize),
    #[error("vertex subset is disconnected")]
    SubsetDisconnected,
    #[error("perfect matching requested on an odd subset of size {0}")]
    OddSubset(usize),
    #[error("no perfect matching exists on the subset")]
    NoPerfectMatching,
    #[error("vertex {0} has odd degree in the multigraph")]
    OddDegreeVertex(usize),
    #[error("multigraph is disconnected or misses the depot")]
    Disconnected,
    #[error("cost matrix malformed: {0}")]
    MalformedMatrix(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RoundingError {
    #[error("value {value} at position {index} lies outside [0, 1]")]
    ValueOutOfRange { index: usize, value: f64 },
    #[error("rounding thresholds must satisfy 1 >= alpha > beta >= 0 (alpha = {alpha}, beta = {beta})")]
    InvalidParams { alpha: f64, beta: f64 },
    #[error("empty sequence")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("validation error in `{field}`: {message}")]
    Validation { field: String, message: String },
}

impl InstanceError {
    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        InstanceError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Prefixes the offending field path, e.g. `steps[0]` becomes `data.steps[0]`.
    pub(crate) fn within(self, prefix: &str) -> Self {
        match self {
            InstanceError::Validation { field, message } => InstanceError::Validation {
                field: format!("{prefix}.{field}"),
                message,
            },
            InstanceError::Schema { path, message } => InstanceError::Schema {
                path: format!("{prefix}.{path}"),
                message,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("instance too large for brute force: {what} = {size} exceeds {limit}")]
    InstanceTooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("instance has no feasible schedule")]
    Infeasible,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rounding(#[from] RoundingError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("element {element} cannot be covered at step {step}")]
    UncoverableElement { step: usize, element: usize },
    #[error("LP relaxation is {0}")]
    LpNotOptimal(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
