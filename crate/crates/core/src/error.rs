use thiserror::Error;

/// Errors raised by the algebra and dynamics routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("resource limit exceeded: {what} would be {actual}, cap is {limit}")]
    ResourceLimit {
        what: &'static str,
        limit: u64,
        actual: u64,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("root finder did not converge: {0}")]
    NonConvergence(String),
    #[error("jet centers do not match")]
    CenterMismatch,
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn limit(what: &'static str, limit: u64, actual: u64) -> Self {
        Error::ResourceLimit {
            what,
            limit,
            actual,
        }
    }

    /// True for errors that mean "gave up" rather than "wrong".
    pub fn is_resource_or_undecided(&self) -> bool {
        matches!(
            self,
            Error::ResourceLimit { .. } | Error::Undecided(_) | Error::NonConvergence(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
