//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("n = {n} out of supported range {min}..={max} for {what}")]
    SizeOutOfRange {
        what: &'static str,
        n: usize,
        min: usize,
        max: usize,
    },

    #[error("operands belong to different algebras (n = {left} vs n = {right})")]
    AlgebraMismatch { left: usize, right: usize },

    #[error("representation kind {kind} requires {parity} n, got n = {n}")]
    ParityMismatch {
        kind: &'static str,
        parity: &'static str,
        n: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got} in {what}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("point is not on the unit sphere: | |x|^2 - 1 | = {defect:.3e} exceeds {tol:.0e}")]
    NotOnSphere { defect: f64, tol: f64 },

    #[error("vector is not tangent at the base point: |<t,x>| = {defect:.3e} exceeds {tol:.0e}")]
    NotTangent { defect: f64, tol: f64 },

    #[error("zero spinor passed where a nonzero one is required")]
    ZeroSpinor,

    #[error(
        "operator image leaves the degree-{m} field space (closure residual {residual:.3e} > {tol:.0e}); increase the degree bound m"
    )]
    DegreeBound { m: usize, residual: f64, tol: f64 },

    #[error("field space for n = {n}, m = {m} would have {size} basis elements (cap {cap}); choose smaller parameters")]
    CombinatorialOverflow { n: usize, m: usize, size: usize, cap: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
