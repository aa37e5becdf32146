use thiserror::Error;

/// Library-wide error type.
///
/// `TheoremViolation` is reserved for internal consistency assertions that are
/// guaranteed by the underlying mathematics; it is surfaced, never patched over.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("classification undefined for the zero vector")]
    ZeroPoint,

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("key set mismatch: {0}")]
    KeySetMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("function is not a TP-function: {0} violation(s)")]
    NotTp(usize),

    #[error("resource guard tripped: {0}")]
    ResourceGuard(String),

    #[error("internal consistency assertion failed (this would falsify a theorem): {0}")]
    TheoremViolation(String),
}
