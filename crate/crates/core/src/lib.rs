//! Exact computation and verification of diagonals of multivariate
//! rational and algebraic power series.
//!
//! - [`expr`]: algebraic-function expressions (parser, normal form, substitution)
//! - [`series`]: truncated multivariate power series over `Q`, diagonals, Hadamard products
//! - [`hypergeom`]: `pFq` series, the `3F2` diagonal family, global-boundedness checks
//! - [`dl`]: the algebraic-to-rational diagonal construction in `2n` variables
//! - [`telescoping`]: Gosper's algorithm and Zeilberger's creative telescoping
//! - [`modp`]: reduction of hypergeometric series modulo `p^r` and functional-equation guessing
//! - [`identity`]: declarative checker for series identities

pub mod dl;
pub mod expr;
pub mod hypergeom;
pub mod identity;
pub mod modp;
pub mod poly1;
pub mod rational;
pub mod series;
pub mod telescoping;

pub use rational::Rational;

/// Library version, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
