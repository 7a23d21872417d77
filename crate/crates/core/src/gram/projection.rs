use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::eigen::{hermitize, EigenDecomposition};
use super::weight::IndexPredicate;
use crate::error::Result;
use crate::vector::{CoeffVector, IndexSet, ZERO};

/// Dimension of a (possibly infinite-dimensional) subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(n) => write!(f, "{n}"),
            Dimension::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Dimension {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dimension::Finite(n) => serializer.serialize_u64(*n as u64),
            Dimension::Infinite => serializer.serialize_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    /// Coordinate projection over a finite diagonal.
    Mask(Vec<bool>),
    /// Coordinate projection over `ℤ \ {0}`.
    Predicate(IndexPredicate),
    /// `P = Q·Qᴴ` with orthonormal columns `Q` taken from an eigenbasis.
    Dense {
        matrix: DMatrix<Complex64>,
        basis: DMatrix<Complex64>,
        members: Vec<bool>,
    },
}

/// Orthogonal spectral projection `E(Δ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProjection {
    repr: Repr,
}

impl SpectralProjection {
    pub(crate) fn mask(mask: Vec<bool>) -> Self {
        Self {
            repr: Repr::Mask(mask),
        }
    }

    pub(crate) fn predicate(pred: IndexPredicate) -> Self {
        Self {
            repr: Repr::Predicate(pred),
        }
    }

    pub(crate) fn dense(eigen: &EigenDecomposition, members: &[bool]) -> Self {
        let n = eigen.dim();
        let cols: Vec<usize> = (0..n).filter(|&k| members[k]).collect();
        let basis = DMatrix::from_fn(n, cols.len(), |r, c| eigen.eigenvectors()[(r, cols[c])]);
        let matrix = hermitize(&(&basis * basis.adjoint()), n);
        Self {
            repr: Repr::Dense {
                matrix,
                basis,
                members: members.to_vec(),
            },
        }
    }

    pub fn index_set(&self) -> IndexSet {
        match &self.repr {
            Repr::Mask(m) => IndexSet::Finite(m.len()),
            Repr::Predicate(_) => IndexSet::SymmetricIntegers,
            Repr::Dense { matrix, .. } => IndexSet::Finite(matrix.nrows()),
        }
    }

    pub fn apply(&self, f: &CoeffVector) -> Result<CoeffVector> {
        self.index_set().ensure_same(&f.index_set())?;
        match &self.repr {
            Repr::Mask(m) => Ok(f.filter_indices(|i| m[i as usize - 1])),
            Repr::Predicate(p) => Ok(f.filter_indices(|i| p.contains(i))),
            Repr::Dense { matrix, .. } => {
                CoeffVector::from_dense(f.index_set(), &(matrix * f.to_dense()?))
            }
        }
    }

    /// Whether a basis vector `eᵢ` lies in the range; only decidable for
    /// coordinate projections.
    pub fn contains_index(&self, index: i64) -> Option<bool> {
        match &self.repr {
            Repr::Mask(m) => {
                let k = usize::try_from(index).ok()?.checked_sub(1)?;
                m.get(k).copied()
            }
            Repr::Predicate(p) => (index != 0).then(|| p.contains(index)),
            Repr::Dense { .. } => None,
        }
    }

    pub fn dimension(&self) -> Dimension {
        match &self.repr {
            Repr::Mask(m) => Dimension::Finite(m.iter().filter(|b| **b).count()),
            Repr::Predicate(p) => p.count().map_or(Dimension::Infinite, Dimension::Finite),
            Repr::Dense { basis, .. } => Dimension::Finite(basis.ncols()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.dimension() == Dimension::Finite(0)
    }

    /// Matrix of the projection over a finite index set.
    pub fn matrix(&self) -> Option<DMatrix<Complex64>> {
        match &self.repr {
            Repr::Mask(m) => Some(DMatrix::from_fn(m.len(), m.len(), |r, c| {
                if r == c && m[r] {
                    Complex64::new(1.0, 0.0)
                } else {
                    ZERO
                }
            })),
            Repr::Predicate(_) => None,
            Repr::Dense { matrix, .. } => Some(matrix.clone()),
        }
    }

    /// Orthonormal basis of the range (columns), over a finite index set.
    pub fn basis(&self) -> Option<DMatrix<Complex64>> {
        match &self.repr {
            Repr::Mask(m) => {
                let cols: Vec<usize> = (0..m.len()).filter(|&k| m[k]).collect();
                Some(DMatrix::from_fn(m.len(), cols.len(), |r, c| {
                    if r == cols[c] {
                        Complex64::new(1.0, 0.0)
                    } else {
                        ZERO
                    }
                }))
            }
            Repr::Predicate(_) => None,
            Repr::Dense { basis, .. } => Some(basis.clone()),
        }
    }

    /// Indices of the range as text, e.g. `{n >= 2}` or `{1, 3}`.
    pub fn describe(&self) -> String {
        match &self.repr {
            Repr::Mask(m) => {
                let idx: Vec<String> = (0..m.len())
                    .filter(|&k| m[k])
                    .map(|k| (k + 1).to_string())
                    .collect();
                format!("{{{}}}", idx.join(", "))
            }
            Repr::Predicate(p) => p.describe(),
            Repr::Dense { basis, .. } => format!("span of {} eigenvectors", basis.ncols()),
        }
    }

    pub(crate) fn index_predicate(&self) -> Option<&IndexPredicate> {
        match &self.repr {
            Repr::Predicate(p) => Some(p),
            _ => None,
        }
    }

    pub(crate) fn mask_values(&self) -> Option<&[bool]> {
        match &self.repr {
            Repr::Mask(m) => Some(m),
            _ => None,
        }
    }

    pub(crate) fn dense_members(&self) -> Option<&[bool]> {
        match &self.repr {
            Repr::Dense { members, .. } => Some(members),
            _ => None,
        }
    }
}
