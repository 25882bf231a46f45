use thiserror::Error;

use crate::field::FieldKind;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (max |a_ij - a_ji| = {deviation:e})")]
    NotSymmetric { deviation: f64 },

    #[error("matrix is not skew-symmetric (max |a_ij + a_ji| = {deviation:e})")]
    NotSkew { deviation: f64 },

    #[error("dimension {0} is odd; a symplectic ambient space needs even dimension")]
    OddDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("basis vectors are linearly dependent (rank {rank} < {count})")]
    DependentBasis { rank: usize, count: usize },

    #[error("expected {expected} input, found {found}")]
    FieldMismatch {
        expected: FieldKind,
        found: FieldKind,
    },

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("irregular crossing at {location}: crossing operator is degenerate")]
    IrregularCrossing { location: f64 },

    #[error("unresolved crossing near {location}: {detail}")]
    UnresolvedCrossing { location: f64, detail: String },

    #[error("numerical decision inside the tolerance band: {0}")]
    Indeterminate(String),

    #[error("bodies {i} and {j} collide (distance {distance:e} below guard {guard:e})")]
    Collision {
        i: usize,
        j: usize,
        distance: f64,
        guard: f64,
    },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
