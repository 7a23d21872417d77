//! Ready-made triples and test-instance generators.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gram::{hermitize, inverse_square_sum, inverse_square_tail, GramOperator};
use crate::grid::GridFunction;
use crate::sampling::{derive_seed, random_matrix, rng};
use crate::triple::QuasiTriple;

/// Samples used by the pairing check that every instance passes on
/// construction.
pub const INSTANCE_CHECK_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct TripleInstance {
    pub name: String,
    pub triple: QuasiTriple,
    pub notes: String,
}

impl TripleInstance {
    /// Wraps a triple after checking the pairing identity on random pairs.
    pub fn new(
        name: impl Into<String>,
        triple: QuasiTriple,
        notes: impl Into<String>,
    ) -> Result<Self> {
        let name = name.into();
        let report =
            triple.check_pairing_identity(INSTANCE_CHECK_SAMPLES, derive_seed(0, &name))?;
        if !report.passed() {
            return Err(Error::PairingIdentity {
                residual: report.max_pivot_residual.max(report.max_psi_residual),
                tolerance: report.psi_tolerance,
            });
        }
        Ok(Self {
            name,
            triple,
            notes: notes.into(),
        })
    }
}

/// Summary line for listings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub name: String,
    pub notes: String,
    pub condition_number: f64,
    pub triple: QuasiTriple,
}

impl From<&TripleInstance> for InstanceSummary {
    fn from(i: &TripleInstance) -> Self {
        Self {
            name: i.name.clone(),
            notes: i.notes.clone(),
            condition_number: i.triple.gram().condition_number(),
            triple: i.triple.clone(),
        }
    }
}

pub fn identity_triple(n: usize) -> Result<TripleInstance> {
    if n == 0 {
        return Err(Error::DimensionMismatch("identity needs n >= 1".into()));
    }
    TripleInstance::new(
        format!("identity-{n}"),
        QuasiTriple::from_gram(GramOperator::identity(n)),
        "G = I: all three norms coincide and the triple is trivially ordinary",
    )
}

/// `G = diag(4, 1, 1/4)`, with `√λ = 2, 1, 1/2` on either side of the unit cut.
pub fn diag_quarter() -> TripleInstance {
    TripleInstance::new(
        "diag-4-1-quarter",
        QuasiTriple::from_gram(GramOperator::diagonal(vec![4.0, 1.0, 0.25]).expect("positive")),
        "finite diagonal G = diag(4, 1, 1/4) with condition number 16",
    )
    .expect("diagonal instance passes its pairing check")
}

/// `ℓ²(ℤ \ {0})` with `w(n) = n²` and `w(−n) = 1/n²`: the plus norm is
/// neither stronger nor weaker than the pivot norm.
pub fn paper_ell2_triple() -> TripleInstance {
    TripleInstance::new(
        "paper-ell2",
        QuasiTriple::from_gram(GramOperator::paper_ell2()),
        "weighted l2(Z\\{0}): <x,y>_+ = sum n^2 x_n conj(y_n) + n^-2 x_-n conj(y_-n); \
         partial sums of e_-i are Cauchy in the plus norm but not in the pivot norm",
    )
    .expect("closed-form instance passes its pairing check")
}

/// Dense Hermitian positive definite Gram matrix with spectrum log-uniform in
/// `[κ^{−1/2}, κ^{1/2}]` (both endpoints attained for `dim ≥ 2`), conjugated
/// by a Haar-distributed unitary.
pub fn random_spd_matrix(dim: usize, condition: f64, seed: u64) -> Result<DMatrix<Complex64>> {
    if dim == 0 {
        return Err(Error::DimensionMismatch("random_spd needs dim >= 1".into()));
    }
    if !(condition >= 1.0 && condition.is_finite()) {
        return Err(Error::Parse(format!(
            "condition number must be >= 1, got {condition}"
        )));
    }
    let mut rng = rng(seed);
    let half = condition.ln() / 2.0;
    let mut logs: Vec<f64> = (0..dim)
        .map(|_| rand::Rng::random_range(&mut rng, -half..=half))
        .collect();
    if dim >= 2 {
        logs[0] = -half;
        logs[dim - 1] = half;
    } else {
        logs[0] = 0.0;
    }
    let gauss = random_matrix(&mut rng, dim, dim);
    let qr = gauss.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..dim {
            u[(row, k)] *= phase;
        }
    }
    let mut scaled = u.clone();
    for (k, l) in logs.iter().enumerate() {
        let lambda = l.exp();
        for row in 0..dim {
            scaled[(row, k)] *= lambda;
        }
    }
    Ok(hermitize(&(scaled * u.adjoint()), dim))
}

pub fn random_spd_triple(dim: usize, condition: f64, seed: u64) -> Result<TripleInstance> {
    let m = random_spd_matrix(dim, condition, seed)?;
    TripleInstance::new(
        format!("random-spd-{dim}-{condition}-{seed}"),
        QuasiTriple::from_gram(GramOperator::dense(m)?),
        format!("dense Hermitian positive definite G of dimension {dim}, condition {condition}, seed {seed}"),
    )
}

/// The named instances; generated ones are reached through [`by_name`].
pub fn instances() -> Vec<TripleInstance> {
    vec![
        identity_triple(3).expect("identity-3"),
        diag_quarter(),
        paper_ell2_triple(),
    ]
}

/// Resolves `identity-N`, `diag-4-1-quarter`, `paper-ell2` and
/// `random-spd-DIM-COND-SEED`.
pub fn by_name(name: &str) -> Result<TripleInstance> {
    let unknown = || Error::Parse(format!("unknown catalog instance `{name}`"));
    match name {
        "diag-4-1-quarter" => Ok(diag_quarter()),
        "paper-ell2" => Ok(paper_ell2_triple()),
        _ => {
            if let Some(n) = name.strip_prefix("identity-") {
                return identity_triple(n.parse().map_err(|_| unknown())?);
            }
            if let Some(rest) = name.strip_prefix("random-spd-") {
                let parts: Vec<&str> = rest.split('-').collect();
                if let [d, c, s] = parts[..] {
                    return random_spd_triple(
                        d.parse().map_err(|_| unknown())?,
                        c.parse().map_err(|_| unknown())?,
                        s.parse().map_err(|_| unknown())?,
                    );
                }
            }
            Err(unknown())
        }
    }
}

/// Plus and pivot norms of `Σ_{i=m}^{n} e₋ᵢ` in the weighted `ℓ²` instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CauchyIncrement {
    /// `(Σ_{i=m}^{n} 1/i²)^{1/2}`.
    pub plus_increment: f64,
    /// `(n − m + 1)^{1/2}`.
    pub pivot_increment: f64,
    /// `(Σ_{i≥m} 1/i²)^{1/2}`, bounding every plus increment from `m` on.
    pub plus_tail: f64,
}

pub fn cauchy_demo(m: u64, n: u64) -> Result<CauchyIncrement> {
    if m == 0 || m > n {
        return Err(Error::InvalidRange { m, n });
    }
    Ok(CauchyIncrement {
        plus_increment: inverse_square_sum(m, n).sqrt(),
        pivot_increment: ((n - m + 1) as f64).sqrt(),
        plus_tail: inverse_square_tail(m).sqrt(),
    })
}

/// Discretized `(Lᵖ, L², L^q)` on `n` midpoint cells of `[0, 1]`.
///
/// Being finite-dimensional, this is an ordinary triple in which all norms
/// are equivalent; it exercises Hölder duality, not unboundedness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpDiscreteTriple {
    p: f64,
    q: f64,
    grid_size: usize,
    cell_weight: f64,
    notes: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderCheck {
    pub pairing_abs: f64,
    /// `‖g‖_q · ‖f‖_p`.
    pub bound: f64,
    /// `pairing_abs / bound` (0 when the bound vanishes).
    pub ratio: f64,
    pub holds: bool,
}

/// Relative slack granted to floating-point Hölder comparisons.
pub const HOLDER_SLACK: f64 = 1e-12;

pub fn lp_discrete_triple(p: f64, n: usize) -> Result<LpDiscreteTriple> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(p));
    }
    if n == 0 {
        return Err(Error::DimensionMismatch(
            "grid size must be positive".into(),
        ));
    }
    let q = p / (p - 1.0);
    Ok(LpDiscreteTriple {
        p,
        q,
        grid_size: n,
        cell_weight: 1.0 / n as f64,
        notes: format!(
            "midpoint grid with {n} cells of weight 1/{n}; finite-dimensional, so all norms are \
             equivalent and only the Hoelder duality is exercised"
        ),
    })
}

impl LpDiscreteTriple {
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn notes(&self) -> &str {
        &self.notes
    }

    pub fn grid_function(&self, values: Vec<Complex64>) -> Result<GridFunction> {
        if values.len() != self.grid_size {
            return Err(Error::DimensionMismatch(format!(
                "grid function has {} samples, grid has {}",
                values.len(),
                self.grid_size
            )));
        }
        GridFunction::with_weight(values, self.cell_weight)
    }

    fn check(&self, u: &GridFunction) -> Result<()> {
        if u.grid_size() != self.grid_size || u.cell_weight() != self.cell_weight {
            return Err(Error::DimensionMismatch(format!(
                "grid function of size {} and weight {} on a grid of size {}",
                u.grid_size(),
                u.cell_weight(),
                self.grid_size
            )));
        }
        Ok(())
    }

    pub fn plus_norm(&self, f: &GridFunction) -> Result<f64> {
        self.check(f)?;
        Ok(f.lp_norm(self.p))
    }

    pub fn minus_norm(&self, g: &GridFunction) -> Result<f64> {
        self.check(g)?;
        Ok(g.lp_norm(self.q))
    }

    pub fn pivot_norm(&self, f: &GridFunction) -> Result<f64> {
        self.check(f)?;
        Ok(f.lp_norm(2.0))
    }

    /// `Σ wᵢ gᵢ·conj(fᵢ)`, the weighted `L²` inner product.
    pub fn pairing(&self, g: &GridFunction, f: &GridFunction) -> Result<Complex64> {
        self.check(f)?;
        self.check(g)?;
        let s: Complex64 = g
            .values()
            .iter()
            .zip(f.values())
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(s * self.cell_weight)
    }

    pub fn holder_check(&self, f: &GridFunction, g: &GridFunction) -> Result<HolderCheck> {
        let pairing_abs = self.pairing(g, f)?.norm();
        let bound = self.minus_norm(g)? * self.plus_norm(f)?;
        let ratio = if bound > 0.0 {
            pairing_abs / bound
        } else {
            0.0
        };
        Ok(HolderCheck {
            pairing_abs,
            bound,
            ratio,
            holds: pairing_abs <= bound * (1.0 + HOLDER_SLACK),
        })
    }

    /// `g = |f|^{p−1}·f/|f|`, the function attaining equality in Hölder.
    pub fn holder_partner(&self, f: &GridFunction) -> Result<GridFunction> {
        self.check(f)?;
        let values = f
            .values()
            .iter()
            .map(|v| {
                let r = v.norm();
                if r == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    v * r.powf(self.p - 2.0)
                }
            })
            .collect();
        GridFunction::with_weight(values, self.cell_weight)
    }
}
