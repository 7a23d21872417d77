use num_complex::Complex64;

use crate::error::{Error, Result};

/// Samples of a function on a uniform grid together with its quadrature weight.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<Complex64>,
    cell_weight: f64,
}

impl GridFunction {
    /// Midpoint samples on `[0, 1]`, each cell weighted `1/n`.
    pub fn uniform(values: Vec<Complex64>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::EmptyVector);
        }
        Self::with_weight(values, 1.0 / n as f64)
    }

    pub fn with_weight(values: Vec<Complex64>, cell_weight: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyVector);
        }
        if !(cell_weight > 0.0 && cell_weight.is_finite()) {
            return Err(Error::Parse(format!(
                "cell weight must be positive, got {cell_weight}"
            )));
        }
        Ok(Self {
            values,
            cell_weight,
        })
    }

    pub fn real(values: &[f64]) -> Result<Self> {
        Self::uniform(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn cell_weight(&self) -> f64 {
        self.cell_weight
    }

    /// `(Σ wᵢ |vᵢ|ᵖ)^{1/p}`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm().powf(p)).sum();
        (self.cell_weight * s).powf(1.0 / p)
    }
}
