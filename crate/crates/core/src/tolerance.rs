use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute/relative thresholds used by checks and constructors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancePolicy {
    #[serde(rename = "algebraic", default = "default_algebraic")]
    pub algebraic_tol: f64,
    #[serde(rename = "oracle", default = "default_oracle")]
    pub oracle_tol: f64,
    /// Multiply tolerances by the condition number of the active Gram operator.
    #[serde(default = "default_scale")]
    pub condition_scale: bool,
}

fn default_algebraic() -> f64 {
    1e-12
}

fn default_oracle() -> f64 {
    1e-9
}

fn default_scale() -> bool {
    true
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            algebraic_tol: default_algebraic(),
            oracle_tol: default_oracle(),
            condition_scale: default_scale(),
        }
    }
}

impl TolerancePolicy {
    pub fn new(algebraic_tol: f64, oracle_tol: f64, condition_scale: bool) -> Result<Self> {
        let policy = Self {
            algebraic_tol,
            oracle_tol,
            condition_scale,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.algebraic_tol >= 0.0
            && self.oracle_tol >= 0.0
            && self.algebraic_tol <= self.oracle_tol;
        if ok {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "tolerances must satisfy 0 <= algebraic ({:e}) <= oracle ({:e})",
                self.algebraic_tol, self.oracle_tol
            )))
        }
    }

    /// Algebraic tolerance for an operator of condition `kappa`.
    pub fn algebraic(&self, kappa: f64) -> f64 {
        self.algebraic_tol * self.factor(kappa)
    }

    pub fn oracle(&self, kappa: f64) -> f64 {
        self.oracle_tol * self.factor(kappa)
    }

    fn factor(&self, kappa: f64) -> f64 {
        if self.condition_scale && kappa.is_finite() {
            kappa.max(1.0)
        } else {
            1.0
        }
    }
}
