//! Exact search and verification for normalized univalent functions whose
//! Taylor coefficients lie in a lattice `(1/m)Z`.
//!
//! The pipeline is bottom-up:
//!
//! - [`exact`]: rationals and lattice enumeration with squared comparisons.
//! - [`series`]: truncated power series (tails of `1/f`, powers of `z/f`).
//! - [`grunsky`]: Grunsky coefficients, Grunsky matrices and exact PSD tests.
//! - [`criteria`]: area interval, de Branges, Prawitz and uniqueness tests.
//! - [`search`]: the branch-and-prune enumerator.
//! - [`reconstruct`]: rational reconstruction, verification and the catalog.
//! - [`geometry`]: floating-point boundary analysis and SVG output.

pub mod criteria;
pub mod exact;
pub mod geometry;
pub mod grunsky;
pub mod parse;
pub mod poly;
pub mod reconstruct;
pub mod search;
pub mod series;

pub use exact::{cmp_sq, lattice_points_in_interval, Lattice, Rat};
pub use reconstruct::RationalFn;
pub use series::{LaurentTail, SigmaPrefix, TaylorPrefix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid lattice denominator {0}; must be positive")]
    InvalidLattice(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("insufficient depth: need {needed}, have {available}")]
    InsufficientDepth { needed: usize, available: usize },
    #[error("function is not normalized: {0}")]
    NotNormalized(String),
    #[error("index ({0}, {1}) out of range")]
    IndexOutOfRange(usize, usize),
    #[error("no rational function of degree <= {0} fits the prefix")]
    NotFound(usize),
    #[error("unknown catalog id {0:?}")]
    UnknownId(String),
    #[error("{0}")]
    Geometry(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
