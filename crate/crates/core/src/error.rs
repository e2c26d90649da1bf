use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty domain: {0}")]
    EmptyDomain(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("discriminant mismatch: {left} vs {right}")]
    DiscriminantMismatch { left: i64, right: i64 },

    /// Theta series of a real character is an Eisenstein series, not a cusp form.
    #[error("Eisenstein case: character is real, theta series is not a cusp form")]
    EisensteinCase,

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("constant A = {given} does not give |B| >= 1; minimal valid A is {minimal}")]
    InsufficientConstant { given: i64, minimal: i64 },
}
