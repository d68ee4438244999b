//! Truncated power series with exact rational coefficients.
//!
//! Multivariate series are truncated to a box (a per-variable degree
//! bound), which is what diagonal extraction needs: the coefficient of
//! `x1^m ... xn^m` is exact as long as `m` is within every bound.

mod expand;
mod json;
mod multi;
mod uni;

pub use expand::{expand, expand_binomial_reference};
pub use json::SeriesJson;
pub use multi::MultiSeries;
pub use uni::UniSeries;

use thiserror::Error;

/// Upper bound on the number of stored coefficients of a single series.
pub const MAX_BOX_VOLUME: usize = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("series has nonzero constant term; cannot substitute it into a power series")]
    NonzeroConstantTerm,
    #[error("series has zero constant term; cannot invert it")]
    NotInvertible,
    #[error("variable pairs overlap on `{0}`")]
    OverlappingPairs(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("series live over different variables or truncations")]
    Mismatch,
    #[error("truncation of `{var}` is {have}, need at least {need}")]
    InsufficientTruncation { var: String, have: u32, need: u32 },
    #[error("truncation box with {0} coefficients exceeds the memory limit")]
    TooLarge(usize),
    #[error("malformed series document: {0}")]
    Format(String),
}
