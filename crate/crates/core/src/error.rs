use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("homomorphism is not well defined: relation column {column} of the source is not mapped into the target relations")]
    NotWellDefined { column: usize },

    #[error("sublattice generator {column} does not lie in the enclosing lattice")]
    NotASublattice { column: usize },

    #[error("elements or maps belong to different groups")]
    GroupMismatch,

    #[error("marked groups carry {left} and {right} marks")]
    MarkCountMismatch { left: usize, right: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is empty")]
    Empty,

    #[error("entry ({row}, {col}) is {value}, expected 0 or 1")]
    NotZeroOne { row: usize, col: usize, value: String },

    #[error("matrix is not irreducible: no path from {from} to {to}")]
    NotIrreducible { from: usize, to: usize },

    #[error("matrix is a permutation matrix")]
    IsPermutation,

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}
