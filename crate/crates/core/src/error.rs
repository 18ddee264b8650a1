use thiserror::Error;

use crate::graph::VertexId;

/// Problems building or parsing an [`Instance`](crate::Instance).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: edge weight {weight} must be strictly positive")]
    NonPositiveWeight { line: usize, weight: f64 },
    #[error("line {line}: self-loop on vertex {vertex} is not allowed")]
    SelfLoop { line: usize, vertex: u64 },
    #[error("vertex {vertex}: probability mass exceeds 1 (total {total})")]
    ProbabilityMass { vertex: u64, total: f64 },
    #[error("vertex {vertex}: invalid tier ({message})")]
    InvalidTier { vertex: u64, message: String },
    #[error("vertex {vertex}: {count} tiers exceeds the configured maximum of {max}")]
    TooManyTiers { vertex: u64, count: usize, max: usize },
    #[error("line {line}: unknown vertex {vertex}")]
    UnknownVertex { line: usize, vertex: u64 },
    #[error("missing start vertex (expected a `start: <id>` line)")]
    MissingStart,
    #[error("start vertex {vertex} must have an empty cost table")]
    StartHasTiers { vertex: u64 },
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(VertexId),
    #[error("walk must begin at the start vertex")]
    WalkStart,
    #[error("walk step {from} -> {to} is not an edge")]
    NotAdjacent { from: VertexId, to: VertexId },
}

/// Failures reported by solvers, reductions and generators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    /// The instance cannot reach the requested success probability at any budget.
    #[error("target probability {target} exceeds the available probability mass {available}")]
    Infeasible { target: f64, available: f64 },
    /// A restricted search (NB) found no admissible walk.
    #[error("no admissible walk reaches the target probability")]
    NoSolution,
    /// A constructive heuristic ran out of candidate sites.
    #[error("construction exhausted the frontier before reaching the target probability")]
    Stuck,
    /// The search budget ran out before any incumbent was found.
    #[error("search limit exceeded after {expansions} expansions without an incumbent")]
    LimitExceeded { expansions: u64 },
    #[error("instance has {vertices} vertices, solver limit is {max}")]
    TooLarge { vertices: usize, max: usize },
    /// Conditional tier probability undefined: the preceding tiers already hold all the mass.
    #[error("vertex {vertex}: tier {tier} follows tiers whose probabilities sum to 1")]
    Degenerate { vertex: VertexId, tier: usize },
    #[error("instance does not have uniform single-tier costs and probabilities: {0}")]
    NotUniform(String),
    #[error("only {available} eligible vertices reachable from the root, {required} required")]
    InsufficientVertices { required: usize, available: usize },
    #[error("no admissible path from {source_vertex} to {target}")]
    Unreachable { source_vertex: VertexId, target: VertexId },
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

impl SolveError {
    /// Short status code used in CSV rows and CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            SolveError::Infeasible { .. } => "INFEASIBLE",
            SolveError::NoSolution => "NO_SOLUTION",
            SolveError::Stuck => "STUCK",
            SolveError::LimitExceeded { .. } => "LIMIT_EXCEEDED",
            SolveError::TooLarge { .. } => "TOO_LARGE",
            SolveError::Degenerate { .. } => "DEGENERATE",
            SolveError::NotUniform(_) => "NOT_UNIFORM",
            SolveError::InsufficientVertices { .. } => "INSUFFICIENT_VERTICES",
            SolveError::Unreachable { .. } => "UNREACHABLE",
            SolveError::Domain(_) => "DOMAIN",
            SolveError::Instance(_) => "INVALID_INSTANCE",
        }
    }
}
