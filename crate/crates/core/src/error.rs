use thiserror::Error;

/// Errors shared across the solver modules.
#[derive(Debug, Error)]
pub enum CdmeError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigenvalue solve failed: {0}")]
    EigensolveFailed(String),

    #[error("requested {requested} modes exceeds what a {grid_size}-point grid resolves (need grid_size >= {})", 8 * requested)]
    UnderResolved { requested: usize, grid_size: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("contraction order {r} out of range for kernel orders {n} and {m}")]
    ContractionOrder { r: usize, n: usize, m: usize },

    #[error("chaos order {n} out of range (max {max})")]
    OrderOutOfRange { n: usize, max: usize },

    #[error("stability guard violated: dt = {dt} requires {limit}; {hint}")]
    StabilityGuard { dt: f64, limit: String, hint: String },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: String },

    #[error("spectral closure residual {residual} exceeds tolerance {tol}; rerun with force_run to proceed anyway")]
    AssumptionViolated { residual: f64, tol: f64 },

    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),

    #[error("expectation budget exceeded: {targets} targets requested, budget {budget}")]
    BudgetExceeded { targets: usize, budget: usize },

    #[error("rejection bound violated: f({x}) = {value} exceeds declared supremum {bound}")]
    RejectionBound { x: f64, value: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, CdmeError>;
