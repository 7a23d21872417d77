//! Gram operators and their functional calculus.
//!
//! A quasi Gelfand triple of Hilbert spaces is determined by one positive,
//! self-adjoint, injective operator `G` on the pivot space: `‖f‖₊ = ‖G^{1/2}f‖₀`
//! and `‖g‖₋ = ‖G^{−1/2}g‖₀`. This module provides three encodings of `G`
//! (closed-form diagonal weights over `ℤ \ {0}`, a finite diagonal, a dense
//! Hermitian matrix) behind one interface.

mod eigen;
mod interval;
mod projection;
mod weight;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use eigen::{EigenDecomposition, EIGEN_RESIDUAL_FACTOR};
pub use interval::IntervalSet;
pub use projection::{Dimension, SpectralProjection};
pub use weight::{
    inverse_square_sum, inverse_square_tail, IndexPredicate, WeightSpec, DIRECT_SUM_LIMIT,
};

use crate::error::{Error, Result};
use crate::vector::{CoeffVector, IndexSet};

pub(crate) use eigen::hermitize;

/// Smallest admissible `λ_min / λ_max` before an operator counts as singular.
pub const INJECTIVITY_RATIO: f64 = 1e-14;

/// Exponents supported by [`GramOperator::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Power {
    One,
    Half,
    MinusOne,
    MinusHalf,
}

impl Power {
    pub fn exponent(self) -> f64 {
        match self {
            Power::One => 1.0,
            Power::Half => 0.5,
            Power::MinusOne => -1.0,
            Power::MinusHalf => -0.5,
        }
    }
}

/// Unvalidated description of a Gram operator, as read from JSON.
#[derive(Debug, Clone, PartialEq)]
pub enum GramSpec {
    Analytic { weight: WeightSpec },
    FiniteDiagonal { lambdas: Vec<f64> },
    Dense { matrix: DMatrix<Complex64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub hermitian_residual: f64,
    /// Infimum of the spectrum (0 for unbounded-below weight families, which
    /// are still injective because every single weight is positive).
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub condition_number: f64,
    pub max_eigen_residual: f64,
    pub unitarity_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum GramKind {
    Analytic(WeightSpec),
    FiniteDiagonal(Vec<f64>),
    Dense {
        matrix: DMatrix<Complex64>,
        eigen: EigenDecomposition,
    },
}

/// A positive, self-adjoint, injective operator on the pivot space.
#[derive(Debug, Clone, PartialEq)]
pub struct GramOperator {
    kind: GramKind,
    report: ValidationReport,
}

/// Checks a candidate Gram operator; `tol` bounds the Hermitian residual
/// relative to `max(1, max |Gᵢⱼ|)`.
pub fn validate_gram(spec: &GramSpec, tol: f64) -> Result<ValidationReport> {
    GramOperator::from_spec_with_tol(spec.clone(), tol).map(|g| g.report)
}

impl GramOperator {
    pub fn from_spec(spec: GramSpec) -> Result<Self> {
        Self::from_spec_with_tol(spec, 1e-12)
    }

    pub fn from_spec_with_tol(spec: GramSpec, tol: f64) -> Result<Self> {
        match spec {
            GramSpec::Analytic { weight } => {
                weight.validate()?;
                let (lo, hi) = weight.weight_range();
                let report = ValidationReport {
                    hermitian_residual: 0.0,
                    min_eigenvalue: lo,
                    max_eigenvalue: hi,
                    condition_number: if lo > 0.0 { hi / lo } else { f64::INFINITY },
                    max_eigen_residual: 0.0,
                    unitarity_residual: 0.0,
                };
                Ok(Self {
                    kind: GramKind::Analytic(weight),
                    report,
                })
            }
            GramSpec::FiniteDiagonal { lambdas } => {
                if lambdas.is_empty() {
                    return Err(Error::EmptyVector);
                }
                if lambdas.iter().any(|l| !l.is_finite()) {
                    return Err(Error::Parse("non-finite diagonal entry".into()));
                }
                let (lo, hi) = min_max(&lambdas);
                check_injective(lo, hi)?;
                let report = ValidationReport {
                    hermitian_residual: 0.0,
                    min_eigenvalue: lo,
                    max_eigenvalue: hi,
                    condition_number: hi / lo,
                    max_eigen_residual: 0.0,
                    unitarity_residual: 0.0,
                };
                Ok(Self {
                    kind: GramKind::FiniteDiagonal(lambdas),
                    report,
                })
            }
            GramSpec::Dense { matrix } => {
                let n = matrix.nrows();
                if n == 0 || matrix.ncols() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "dense Gram matrix must be square and nonempty, got {}x{}",
                        n,
                        matrix.ncols()
                    )));
                }
                if matrix
                    .iter()
                    .any(|z| !(z.re.is_finite() && z.im.is_finite()))
                {
                    return Err(Error::Parse("non-finite matrix entry".into()));
                }
                let scale = matrix.camax().max(1.0);
                let herm = (&matrix - matrix.adjoint()).camax() / scale;
                if herm > tol {
                    return Err(Error::NotSelfAdjoint {
                        residual: herm,
                        tolerance: tol,
                    });
                }
                let matrix = hermitize(&matrix, n);
                let eigen = EigenDecomposition::compute(&matrix)?;
                let (lo, hi) = min_max(eigen.eigenvalues());
                check_injective(lo, hi)?;
                let report = ValidationReport {
                    hermitian_residual: herm,
                    min_eigenvalue: lo,
                    max_eigenvalue: hi,
                    condition_number: hi / lo,
                    max_eigen_residual: eigen.residuals(&matrix).into_iter().fold(0.0, f64::max),
                    unitarity_residual: eigen.unitarity_residual(),
                };
                Ok(Self {
                    kind: GramKind::Dense { matrix, eigen },
                    report,
                })
            }
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![1.0; n]).expect("identity is a valid Gram operator")
    }

    pub fn diagonal(lambdas: Vec<f64>) -> Result<Self> {
        Self::from_spec(GramSpec::FiniteDiagonal { lambdas })
    }

    pub fn analytic(weight: WeightSpec) -> Result<Self> {
        Self::from_spec(GramSpec::Analytic { weight })
    }

    pub fn paper_ell2() -> Self {
        Self::analytic(WeightSpec::PaperEll2).expect("paper weights are positive")
    }

    pub fn dense(matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::from_spec(GramSpec::Dense { matrix })
    }

    pub fn index_set(&self) -> IndexSet {
        match &self.kind {
            GramKind::Analytic(_) => IndexSet::SymmetricIntegers,
            GramKind::FiniteDiagonal(l) => IndexSet::Finite(l.len()),
            GramKind::Dense { matrix, .. } => IndexSet::Finite(matrix.nrows()),
        }
    }

    pub fn validation(&self) -> &ValidationReport {
        &self.report
    }

    /// `κ(G) = λ_max / λ_min`, infinite for unbounded weight families.
    pub fn condition_number(&self) -> f64 {
        self.report.condition_number
    }

    pub fn is_diagonal(&self) -> bool {
        !matches!(self.kind, GramKind::Dense { .. })
    }

    pub fn weight(&self) -> Option<&WeightSpec> {
        match &self.kind {
            GramKind::Analytic(w) => Some(w),
            _ => None,
        }
    }

    pub fn eigen(&self) -> Option<&EigenDecomposition> {
        match &self.kind {
            GramKind::Dense { eigen, .. } => Some(eigen),
            _ => None,
        }
    }

    /// Diagonal entry `λᵢ` for diagonal kinds.
    pub fn diagonal_entry(&self, index: i64) -> Option<f64> {
        self.diagonal_pow(index, 1.0)
    }

    fn diagonal_pow(&self, index: i64, p: f64) -> Option<f64> {
        match &self.kind {
            GramKind::Analytic(w) if index != 0 => Some(w.weight_pow(index, p)),
            GramKind::FiniteDiagonal(l) => {
                let k = usize::try_from(index).ok()?.checked_sub(1)?;
                let lambda = *l.get(k)?;
                Some(if p == 0.5 {
                    lambda.sqrt()
                } else if p == -0.5 {
                    1.0 / lambda.sqrt()
                } else {
                    lambda.powf(p)
                })
            }
            _ => None,
        }
    }

    /// Matrix of `G` over a finite index set.
    pub fn matrix(&self) -> Option<DMatrix<Complex64>> {
        match &self.kind {
            GramKind::Analytic(_) => None,
            GramKind::FiniteDiagonal(l) => {
                Some(DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    l.len(),
                    l.iter().map(|&x| Complex64::new(x, 0.0)),
                )))
            }
            GramKind::Dense { matrix, .. } => Some(matrix.clone()),
        }
    }

    /// `G^p f`.
    pub fn apply(&self, f: &CoeffVector, power: Power) -> Result<CoeffVector> {
        self.index_set().ensure_same(&f.index_set())?;
        let p = power.exponent();
        match &self.kind {
            GramKind::Dense { matrix, eigen } => {
                let x = f.to_dense()?;
                let y = if power == Power::One {
                    matrix * x
                } else {
                    eigen.apply_fn(&x, |l| l.powf(p))
                };
                CoeffVector::from_dense(f.index_set(), &y)
            }
            _ => Ok(f.map_indexed(|i, v| {
                v * self
                    .diagonal_pow(i, p)
                    .expect("index checked against the operator's index set")
            })),
        }
    }

    /// `φ(G) f` for a real spectral function `φ`.
    pub fn apply_fn(&self, f: &CoeffVector, phi: impl Fn(f64) -> f64) -> Result<CoeffVector> {
        self.index_set().ensure_same(&f.index_set())?;
        match &self.kind {
            GramKind::Dense { eigen, .. } => {
                let y = eigen.apply_fn(&f.to_dense()?, phi);
                CoeffVector::from_dense(f.index_set(), &y)
            }
            _ => Ok(f.map_indexed(|i, v| {
                v * phi(self
                    .diagonal_entry(i)
                    .expect("index checked against the operator"))
            })),
        }
    }

    /// `G⁻¹`, sharing the eigenbasis for dense operators.
    pub fn inverse(&self) -> GramOperator {
        let kind = match &self.kind {
            GramKind::Analytic(w) => GramKind::Analytic(w.inverse()),
            GramKind::FiniteDiagonal(l) => {
                GramKind::FiniteDiagonal(l.iter().map(|x| 1.0 / x).collect())
            }
            GramKind::Dense { eigen, .. } => {
                let n = eigen.dim();
                let values: Vec<f64> = eigen.eigenvalues().iter().rev().map(|l| 1.0 / l).collect();
                let vectors = DMatrix::from_fn(n, n, |r, c| eigen.eigenvectors()[(r, n - 1 - c)]);
                let inv = EigenDecomposition::from_parts(values, vectors);
                let matrix = inv.matrix_fn(|l| l);
                GramKind::Dense { matrix, eigen: inv }
            }
        };
        let r = &self.report;
        let lo = if r.max_eigenvalue.is_infinite() {
            0.0
        } else {
            1.0 / r.max_eigenvalue
        };
        let hi = if r.min_eigenvalue == 0.0 {
            f64::INFINITY
        } else {
            1.0 / r.min_eigenvalue
        };
        GramOperator {
            kind,
            report: ValidationReport {
                min_eigenvalue: lo,
                max_eigenvalue: hi,
                ..r.clone()
            },
        }
    }

    /// Orthogonal projection onto the spectral subspace of `G^{1/2}` for the
    /// values `√λ ∈ cut`.
    pub fn spectral_projection(&self, cut: &IntervalSet) -> Result<SpectralProjection> {
        match &self.kind {
            GramKind::Analytic(w) => Ok(SpectralProjection::predicate(w.predicate(cut)?)),
            GramKind::FiniteDiagonal(l) => Ok(SpectralProjection::mask(
                l.iter().map(|x| cut.contains(x.sqrt())).collect(),
            )),
            GramKind::Dense { eigen, .. } => {
                let members = cluster_membership(eigen, cut);
                Ok(SpectralProjection::dense(eigen, &members))
            }
        }
    }

    /// `√λ` values of the eigen-directions selected by `projection`, as
    /// `(inf, sup)`; `None` for an empty projection.
    pub fn sqrt_spectrum_range(&self, projection: &SpectralProjection) -> Option<(f64, f64)> {
        match &self.kind {
            GramKind::Analytic(w) => w.sqrt_range(projection.index_predicate()?),
            GramKind::FiniteDiagonal(l) => range_where(
                l.iter().map(|x| x.sqrt()),
                projection.mask_values()?.iter().copied(),
            ),
            GramKind::Dense { eigen, .. } => range_where(
                eigen.eigenvalues().iter().map(|x| x.sqrt()),
                projection.dense_members()?.iter().copied(),
            ),
        }
    }

    pub fn to_spec(&self) -> GramSpec {
        match &self.kind {
            GramKind::Analytic(w) => GramSpec::Analytic { weight: w.clone() },
            GramKind::FiniteDiagonal(l) => GramSpec::FiniteDiagonal { lambdas: l.clone() },
            GramKind::Dense { matrix, .. } => GramSpec::Dense {
                matrix: matrix.clone(),
            },
        }
    }
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

fn range_where(
    values: impl Iterator<Item = f64>,
    keep: impl Iterator<Item = bool>,
) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .zip(keep)
        .filter(|(_, k)| *k)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (v, _)| {
            (lo.min(v), hi.max(v))
        });
    (lo <= hi).then_some((lo, hi))
}

fn check_injective(lo: f64, hi: f64) -> Result<()> {
    if lo <= 0.0 || lo < INJECTIVITY_RATIO * hi {
        Err(Error::NotInjective {
            min_eigenvalue: lo,
            max_eigenvalue: hi,
        })
    } else {
        Ok(())
    }
}

/// Eigenvalues within one cluster share a spectral subspace, so the whole
/// cluster goes to the side that contains the cluster's mean `√λ`.
fn cluster_membership(eigen: &EigenDecomposition, cut: &IntervalSet) -> Vec<bool> {
    let values = eigen.eigenvalues();
    let gap = 1e-12 * eigen.norm();
    let mut members = vec![false; values.len()];
    for range in eigen.clusters(gap) {
        let mean = values[range.clone()].iter().sum::<f64>() / range.len() as f64;
        let inside = cut.contains(mean.sqrt());
        for k in range {
            members[k] = inside;
        }
    }
    members
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum GramSpecJson {
    Analytic { weight: WeightSpec },
    FiniteDiagonal { lambdas: Vec<f64> },
    Dense { matrix: Vec<Vec<[f64; 2]>> },
}

impl Serialize for GramSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let json = match self {
            GramSpec::Analytic { weight } => GramSpecJson::Analytic {
                weight: weight.clone(),
            },
            GramSpec::FiniteDiagonal { lambdas } => GramSpecJson::FiniteDiagonal {
                lambdas: lambdas.clone(),
            },
            GramSpec::Dense { matrix } => GramSpecJson::Dense {
                matrix: (0..matrix.nrows())
                    .map(|r| {
                        (0..matrix.ncols())
                            .map(|c| [matrix[(r, c)].re, matrix[(r, c)].im])
                            .collect()
                    })
                    .collect(),
            },
        };
        json.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GramSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(match GramSpecJson::deserialize(deserializer)? {
            GramSpecJson::Analytic { weight } => GramSpec::Analytic { weight },
            GramSpecJson::FiniteDiagonal { lambdas } => GramSpec::FiniteDiagonal { lambdas },
            GramSpecJson::Dense { matrix } => {
                let n = matrix.len();
                if matrix.iter().any(|row| row.len() != n) {
                    return Err(serde::de::Error::custom("dense Gram matrix must be square"));
                }
                GramSpec::Dense {
                    matrix: DMatrix::from_fn(n, n, |r, c| {
                        Complex64::new(matrix[r][c][0], matrix[r][c][1])
                    }),
                }
            }
        })
    }
}
