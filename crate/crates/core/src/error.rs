use thiserror::Error;

/// Errors raised by the algebra routines.
///
/// Precondition failures name the invariant that was violated so the CLI can
/// report it verbatim; `Verification` is reserved for computed objects that
/// fail a post-check.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReesError {
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("bidegree mismatch: expected {expected:?}, got {found:?}")]
    BidegreeMismatch {
        expected: (u32, u32),
        found: (u32, u32),
    },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("invalid modulus {0}: must be a prime below 2^63")]
    InvalidModulus(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated ({invariant}): {detail}")]
    Precondition {
        invariant: &'static str,
        detail: String,
    },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl ReesError {
    pub fn precondition(invariant: &'static str, detail: impl Into<String>) -> Self {
        ReesError::Precondition {
            invariant,
            detail: detail.into(),
        }
    }

    /// True for errors caused by the input rather than by a failed check.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, ReesError::Verification(_))
    }
}

pub type Result<T> = std::result::Result<T, ReesError>;
