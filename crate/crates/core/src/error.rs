use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Argument outside the domain of an operation (foreign element, left
    /// derivative at zero, negative coordinate, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An exhaustive check or enumeration would exceed its configured cap.
    #[error("capacity exceeded: {what} is {actual}, limit {limit}")]
    Capacity {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    /// Empty base polytope, or no feasible point for the requested parameters.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// An operation was called on input that violates its documented
    /// precondition (e.g. a non-optimal allocation handed to a reoptimizer).
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input is structurally unsuitable for the requested construction,
    /// e.g. a non-submodular rank function passed to the equilibrium solver.
    #[error("rejected: {0}")]
    Rejected(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A runtime certificate failed. This always indicates a bug, never bad input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
