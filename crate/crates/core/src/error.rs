//! Error type shared by every module of the crate.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Failures reported by the library.
///
/// Validation problems (bad inputs) and numerical problems (a tolerance that
/// could not be reached) are kept apart so front ends can map them to
/// different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("discriminant {0} is not a negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("form [{b},{a},{c}] is not positive definite")]
    NotPositiveDefinite { b: i64, a: i64, c: i64 },
    #[error("form [{b},{a},{c}] is not primitive")]
    Imprimitive { b: i64, a: i64, c: i64 },
    #[error("form [{b},{a},{c}] has discriminant {found}, expected {expected}")]
    WrongDiscriminant { b: i64, a: i64, c: i64, found: i64, expected: i64 },
    #[error("prime {p} is {kind} in discriminant {d}")]
    NotSplit { p: u64, d: i64, kind: &'static str },
    #[error("weight {0} is not supported here")]
    UnsupportedWeight(i64),
    #[error("truncation too small: need det4 <= {needed}, have {available}")]
    InsufficientTruncation { needed: i64, available: i64 },
    #[error("basis is rank deficient on the available coefficients (rank {rank} < {dim}); largest usable det4 is {largest}")]
    RankDeficient { rank: usize, dim: usize, largest: i64 },
    #[error("image of the Hecke operator is not in the span of the basis")]
    NotInSpan,
    #[error("eigenvalues collide for every tried generator; cannot separate eigenforms")]
    EigenvalueCollision,
    #[error("eigenform with eigenvalue data does not match any elliptic form at p = {0}")]
    LiftMismatch(u64),
    #[error("value is not rational")]
    NotRational,
    #[error("tolerance {requested:e} not reached (estimate {achieved:e}): {what}")]
    Tolerance { what: String, requested: f64, achieved: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True when the error is a numerical tolerance failure rather than a bad input.
    pub fn is_tolerance(&self) -> bool {
        matches!(self, Error::Tolerance { .. })
    }
}
