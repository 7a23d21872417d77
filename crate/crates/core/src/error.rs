use thiserror::Error;

use crate::vector::IndexSet;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index set mismatch: {left} vs {right}")]
    IndexSetMismatch { left: String, right: String },

    #[error("index {index} does not belong to {set}")]
    IndexOutOfSet { index: i64, set: IndexSet },

    #[error("invalid interval ({lo}, {hi}]: {reason}")]
    InvalidInterval { lo: f64, hi: f64, reason: String },

    #[error("operator is not self-adjoint: hermitian residual {residual:e} exceeds {tolerance:e}")]
    NotSelfAdjoint { residual: f64, tolerance: f64 },

    /// The spectrum touches zero. A positive self-adjoint operator has dense
    /// range iff it is injective, so the caller must split off the kernel and
    /// work on the closure of the range explicitly.
    #[error(
        "operator is not injective: minimal eigenvalue {min_eigenvalue:e} (largest {max_eigenvalue:e}); \
         split X0 = ker G (+) cl(ran G) and restrict to the range before building a triple"
    )]
    NotInjective {
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },

    #[error("pairing identity fails: residual {residual:e} exceeds {tolerance:e}")]
    PairingIdentity { residual: f64, tolerance: f64 },

    #[error("eigenpair {index} violates the residual bound: {residual:e} > {bound:e}")]
    EigenResidual {
        index: usize,
        residual: f64,
        bound: f64,
    },

    #[error("vector is empty")]
    EmptyVector,

    #[error("component leak: {0}")]
    ComponentLeak(String),

    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("selection exhausted after {} of {requested} picks", partial.len())]
    SelectionExhausted {
        partial: Vec<usize>,
        requested: usize,
    },

    #[error("invalid range: m = {m} > n = {n}")]
    InvalidRange { m: u64, n: u64 },

    #[error("invalid exponent p = {0}: must lie in (1, inf)")]
    InvalidExponent(f64),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn mismatch(left: &IndexSet, right: &IndexSet) -> Self {
        Error::IndexSetMismatch {
            left: left.to_string(),
            right: right.to_string(),
        }
    }
}
