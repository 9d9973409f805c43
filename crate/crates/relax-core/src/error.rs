use thiserror::Error;

/// Every fallible operation in the crate returns this error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("impurity {kind} is not supported by model {model}")]
    UnsupportedImpurity { model: String, kind: String },

    #[error("system size L={l} is below the minimal gate span {span}")]
    SpanError { l: usize, span: usize },

    #[error("operation budget exceeded: requested {requested} > budget {budget}")]
    BudgetError { requested: u128, budget: u128 },

    #[error("state space of size {size} exceeds cap {cap}")]
    SizeError { size: u128, cap: u128 },

    #[error("eigensolver failed: {0}")]
    EigFailure(String),

    #[error("fit window [{lo}, {hi}] holds {points} points, need at least {need}")]
    WindowError {
        lo: f64,
        hi: f64,
        points: usize,
        need: usize,
    },

    #[error("non-positive value {value} at t={t} cannot be log-transformed")]
    NonPositiveValue { t: f64, value: f64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("quadrature failed: achieved error {achieved:e} > target {target:e}")]
    QuadratureFailure { achieved: f64, target: f64 },

    #[error("root finding failed in bracket [{lo}, {hi}]: {reason}")]
    RootFindFailure { lo: f64, hi: f64, reason: String },

    #[error("unknown regime: {0}")]
    UnknownRegime(String),

    #[error("iterative eigensolver did not converge after {iterations} restarts (residual {residual:e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    #[error("overlap normalisation failed: {got} vs expected {expected}")]
    OverlapError { got: f64, expected: f64 },

    #[error("invalid field `{path}`: {reason}")]
    ValidationError { path: String, reason: String },

    #[error("time grids differ: {0}")]
    GridMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation(path: &str, reason: impl Into<String>) -> Error {
    Error::ValidationError {
        path: path.to_string(),
        reason: reason.into(),
    }
}
