use thiserror::Error;

/// Errors produced by the solvers and experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("iteration did not converge: {0}")]
    Convergence(String),

    #[error("jacobian is singular or produced non-finite solution: {0}")]
    SingularJacobian(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("no sign reversal bracketing a fold in the branch")]
    NotBracketed,

    #[error("solver converged to a degenerate (rest-state) profile")]
    DegenerateSolution,

    #[error("eigenvalue solver failed: {0}")]
    EigenSolver(String),

    #[error("far-field wave train left the precomputed dispersion neighborhood: {0}")]
    FarFieldMismatch(String),

    #[error("pulse tails overlap at the junction (max tail product {0:.3e})")]
    Overlap(f64),

    #[error("ingredient solve failed: {0}")]
    Ingredient(String),

    #[error("no bump amplitude in [0,1] produced a reflection")]
    NoReflection,

    #[error("peak count and directions are inconsistent: {0}")]
    AmbiguousOutcome(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
