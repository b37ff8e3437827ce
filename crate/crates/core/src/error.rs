use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("index ({i}, {j}, {k}) out of range for N = {n}")]
    Index { i: usize, j: usize, k: usize, n: usize },

    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),

    #[error("singular scheme matrix at h = {h}")]
    SingularScheme { h: f64 },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("iteration failed to converge after {iterations} iterations (residual {residual:e})")]
    IterationFailure { iterations: usize, residual: f64 },

    #[error("boundary policy: {0}")]
    Config(String),

    #[error("empty extremum set")]
    EmptySet,

    #[error("interval of {len} points is too short (need at least 3)")]
    UndefinedInterval { len: usize },

    #[error("premise violated: {0}")]
    PremiseViolation(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("iteration {iteration} produced non-finite values")]
    Divergence { iteration: usize },

    #[error("time step failed: {reason} (residual {residual:e})")]
    StepFailure { reason: String, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
