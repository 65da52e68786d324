use thiserror::Error;

/// Errors raised anywhere in the solver pipeline or harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("graph has no perfect matching")]
    NoPerfectMatching,
    #[error("degree demands cannot be met: {0}")]
    Infeasible(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cover is not kite-free: {0}")]
    NotKiteFree(String),
    #[error("unhandled case: {0}")]
    UnhandledCase(String),
    #[error("instance too large for exact oracle: n = {0}")]
    TooLarge(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
