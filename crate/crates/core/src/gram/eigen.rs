use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Spectral decomposition `G = V·diag(λ)·Vᴴ` of a Hermitian matrix, with
/// eigenvalues in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

/// Per-eigenpair residual budget: `‖Gv − λv‖ ≤ EIGEN_RESIDUAL_FACTOR·n·ε·‖G‖`.
pub const EIGEN_RESIDUAL_FACTOR: f64 = 64.0;

impl EigenDecomposition {
    /// Decomposes `matrix` (assumed Hermitian) and rejects the result if any
    /// eigenpair violates the residual bound.
    pub fn compute(matrix: &DMatrix<Complex64>) -> Result<Self> {
        let n = matrix.nrows();
        let eig = SymmetricEigen::new(matrix.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        let out = Self {
            eigenvalues,
            eigenvectors,
        };
        let bound = out.residual_bound();
        for (k, r) in out.residuals(matrix).into_iter().enumerate() {
            if r > bound {
                return Err(Error::EigenResidual {
                    index: k,
                    residual: r,
                    bound,
                });
            }
        }
        Ok(out)
    }

    /// Builds a decomposition from known factors without recomputation.
    pub(crate) fn from_parts(eigenvalues: Vec<f64>, eigenvectors: DMatrix<Complex64>) -> Self {
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    /// Spectral norm `max |λ|`.
    pub fn norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, l| m.max(l.abs()))
    }

    pub fn residual_bound(&self) -> f64 {
        EIGEN_RESIDUAL_FACTOR * self.dim() as f64 * f64::EPSILON * self.norm()
    }

    /// `‖G·vₖ − λₖ·vₖ‖` for every eigenpair.
    pub fn residuals(&self, matrix: &DMatrix<Complex64>) -> Vec<f64> {
        (0..self.dim())
            .map(|k| {
                let v = self.eigenvectors.column(k);
                (matrix * v - v * Complex64::new(self.eigenvalues[k], 0.0)).norm()
            })
            .collect()
    }

    /// `max |VᴴV − I|` entrywise.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        let gram = self.eigenvectors.adjoint() * &self.eigenvectors;
        (gram - DMatrix::<Complex64>::identity(n, n)).camax()
    }

    /// `φ(G)·x = V·diag(φ(λ))·Vᴴ·x`.
    pub fn apply_fn(&self, x: &DVector<Complex64>, phi: impl Fn(f64) -> f64) -> DVector<Complex64> {
        let mut coeffs = self.eigenvectors.adjoint() * x;
        for (c, &l) in coeffs.iter_mut().zip(&self.eigenvalues) {
            *c *= phi(l);
        }
        &self.eigenvectors * coeffs
    }

    /// `φ(G)` as a matrix.
    pub fn matrix_fn(&self, phi: impl Fn(f64) -> f64) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            let s = phi(l);
            scaled.column_mut(k).scale_mut(s);
        }
        let m = scaled * self.eigenvectors.adjoint();
        hermitize(&m, n)
    }

    /// Groups eigenvalue indices into clusters whose consecutive gaps are at
    /// most `gap`.
    pub fn clusters(&self, gap: f64) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for k in 1..=self.dim() {
            if k == self.dim() || self.eigenvalues[k] - self.eigenvalues[k - 1] > gap {
                out.push(start..k);
                start = k;
            }
        }
        out
    }
}

pub(crate) fn hermitize(m: &DMatrix<Complex64>, n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |r, c| (m[(r, c)] + m[(c, r)].conj()) * 0.5)
}
