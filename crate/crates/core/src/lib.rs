//! Numerical toolkit for quasi Gelfand triples of Hilbert spaces.
//!
//! A triple `(X₊, X₀, X₋)` is encoded by its Gram operator `G` on the pivot
//! space `X₀`. Elements are represented by finitely supported coefficient
//! vectors, which lie in `D₊ ∩ D₋` for every triple, so all norms, pairings
//! and duality maps are computed exactly in closed form; randomized oracles
//! witness the sup/inf characterizations independently.

pub mod catalog;
pub mod decomp;
pub mod error;
pub mod gram;
pub mod grid;
pub mod relations;
pub mod sampling;
pub mod tolerance;
pub mod triple;
pub mod vector;
pub mod zspace;

pub use error::{Error, Result};
pub use gram::{GramOperator, GramSpec, IntervalSet, Power, WeightSpec};
pub use tolerance::TolerancePolicy;
pub use triple::QuasiTriple;
pub use vector::{pivot_inner, pivot_norm, vec_axpy, CoeffVector, IndexSet, Scalar};
