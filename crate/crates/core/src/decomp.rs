//! Splitting a quasi Gelfand triple into two ordinary Gelfand triples.
//!
//! A bounded cut `Δ` on the spectrum of `G^{1/2}` (values `√λ`, not `λ`)
//! separates `X₀ = ran E(Δᶜ) ⊕ ran E(Δ)`. On `ran E(Δᶜ)` the plus norm
//! dominates the pivot norm, on `ran E(Δ)` it is dominated by it, so each
//! piece carries an ordinary, continuously embedded triple. Boundary values
//! follow the half-open convention `(a, b]`: with the default cut `(0, 1]`,
//! `√λ = 1` lands on the bounded side.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gram::{
    hermitize, Dimension, GramOperator, GramSpec, IntervalSet, Power, SpectralProjection,
};
use crate::sampling::{random_vector, rng};
use crate::triple::QuasiTriple;
use crate::vector::{pivot_inner, pivot_norm, CoeffVector};

/// Which norm dominates on a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    /// `‖f‖₊ ≥ c‖f‖₀`: the classical chain `X₊ ⊆ X₀ ⊆ X₋`.
    PlusDominates,
    /// `‖f‖₊ ≤ c‖f‖₀`: the chain runs `X₋ ⊆ X₀ ⊆ X₊`.
    PivotDominates,
}

/// One of the two ordinary triples of a split.
#[derive(Debug, Clone, PartialEq)]
pub struct OrdinaryTriple {
    /// `G` restricted to the spectral subspace, in the coordinates of
    /// [`OrdinaryTriple::basis`]; `None` for closed-form weight families and
    /// for the zero subspace.
    pub gram_restricted: Option<GramOperator>,
    /// Orthonormal basis of the subspace (finite index sets only).
    pub basis: Option<DMatrix<Complex64>>,
    pub dimension: Dimension,
    /// `(inf, sup)` of `√λ` on the subspace.
    pub spectral_bounds: Option<(f64, f64)>,
    /// Norm of the continuous embedding: `sup ‖f‖₀/‖f‖₊` for
    /// [`Dominance::PlusDominates`], `sup ‖f‖₊/‖f‖₀` otherwise; 0 on `{0}`.
    pub embedding_constant: f64,
    pub direction: Dominance,
    pub description: String,
}

impl OrdinaryTriple {
    fn build(
        triple: &QuasiTriple,
        projection: &SpectralProjection,
        direction: Dominance,
    ) -> Result<Self> {
        let gram = triple.gram();
        let spectral_bounds = gram.sqrt_spectrum_range(projection);
        let embedding_constant = match (spectral_bounds, direction) {
            (None, _) => 0.0,
            (Some((lo, _)), Dominance::PlusDominates) => 1.0 / lo,
            (Some((_, hi)), Dominance::PivotDominates) => hi,
        };
        let basis = projection.basis();
        let gram_restricted = match (&basis, gram.matrix()) {
            (Some(q), Some(g)) if q.ncols() > 0 => {
                let k = q.ncols();
                let restricted = hermitize(&(q.adjoint() * g * q), k);
                Some(GramOperator::from_spec_with_tol(
                    GramSpec::Dense { matrix: restricted },
                    triple.tol(),
                )?)
            }
            _ => None,
        };
        Ok(Self {
            gram_restricted,
            basis,
            dimension: projection.dimension(),
            spectral_bounds,
            embedding_constant,
            direction,
            description: projection.describe(),
        })
    }
}

/// `X₀ = ran E(Δᶜ) ⊕ ran E(Δ)` with the two induced ordinary triples.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSplit {
    pub cut: IntervalSet,
    /// `E(Δ)`.
    pub proj_bounded: SpectralProjection,
    /// `E(Δᶜ)`.
    pub proj_unbounded: SpectralProjection,
    /// The `Δᶜ` side, where `‖·‖₊` dominates.
    pub component1: OrdinaryTriple,
    /// The `Δ` side, where `‖·‖₀` dominates.
    pub component2: OrdinaryTriple,
}

/// Splits `triple` along the bounded cut `cut` on the `√λ` scale.
pub fn decompose(triple: &QuasiTriple, cut: &IntervalSet) -> Result<SpectralSplit> {
    if !cut.is_bounded() {
        return Err(Error::InvalidInterval {
            lo: cut.lower(),
            hi: cut.upper(),
            reason: "decomposition cuts must be bounded".into(),
        });
    }
    let complement = cut.complement();
    let gram = triple.gram();
    let proj_bounded = gram.spectral_projection(cut)?;
    let proj_unbounded = gram.spectral_projection(&complement)?;
    let component1 = OrdinaryTriple::build(triple, &proj_unbounded, Dominance::PlusDominates)?;
    let component2 = OrdinaryTriple::build(triple, &proj_bounded, Dominance::PivotDominates)?;
    Ok(SpectralSplit {
        cut: cut.clone(),
        proj_bounded,
        proj_unbounded,
        component1,
        component2,
    })
}

/// Largest relative residual of each family of checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DecompositionResiduals {
    /// Idempotence, self-adjointness, completeness, mutual annihilation.
    pub projection_algebra: f64,
    /// `E(Δ)G^p = G^pE(Δ)` for `p ∈ {1, ½, −1, −½}`.
    pub commutation: f64,
    /// Excess of `‖Ef‖₊`, `‖Ef‖₋` over `‖f‖₊`, `‖f‖₋`.
    pub contractivity: f64,
    /// Inner products of the two parts in `⟨·,·⟩₀`, `⟨·,·⟩₊`, `⟨·,·⟩₋`.
    pub orthogonality: f64,
    /// Violation of `‖E(Δᶜ)f‖₊ ≥ inf√λ·‖E(Δᶜ)f‖₀` and
    /// `‖E(Δ)f‖₊ ≤ sup√λ·‖E(Δ)f‖₀`.
    pub spectral_bounds: f64,
    /// Violation of the constant-1 inequalities for both `‖·‖₊` and `‖·‖₋`;
    /// only meaningful when `constant_one` holds.
    pub unit_inequalities: f64,
    /// `⟨E(Δ)f, E(Δᶜ)g⟩₀` and `⟨E(Δᶜ)f, E(Δ)g⟩₀`.
    pub cross_duality: f64,
}

impl DecompositionResiduals {
    pub fn max(&self) -> f64 {
        [
            self.projection_algebra,
            self.commutation,
            self.contractivity,
            self.orthogonality,
            self.spectral_bounds,
            self.unit_inequalities,
            self.cross_duality,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    pub dim: Dimension,
    pub predicate: String,
    pub sqrt_spectrum: Option<[f64; 2]>,
    pub embedding_constant: f64,
    pub direction: Dominance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub cut: Vec<[f64; 2]>,
    pub component1_dim: Dimension,
    pub component2_dim: Dimension,
    pub component1: ComponentReport,
    pub component2: ComponentReport,
    pub samples: usize,
    pub seed: u64,
    pub residuals: DecompositionResiduals,
    pub tolerance: f64,
    /// `inf√λ ≥ 1` on component 1 and `sup√λ ≤ 1` on component 2, so both
    /// norm inequalities hold with constant 1.
    pub constant_one: bool,
    pub passed: bool,
    /// Sample attaining the largest residual.
    #[serde(skip)]
    pub worst: Option<CoeffVector>,
}

fn component_report(c: &OrdinaryTriple) -> ComponentReport {
    ComponentReport {
        dim: c.dimension,
        predicate: c.description.clone(),
        sqrt_spectrum: c.spectral_bounds.map(|(lo, hi)| [lo, hi]),
        embedding_constant: c.embedding_constant,
        direction: c.direction,
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else {
        diff / scale.max(f64::MIN_POSITIVE)
    }
}

/// Excess of `a` over `b`, relative to `b`.
fn excess(a: f64, b: f64) -> f64 {
    rel((a - b).max(0.0), b)
}

/// Runs every structural check of the split on `samples` random vectors.
pub fn verify_decomposition(
    split: &SpectralSplit,
    triple: &QuasiTriple,
    samples: usize,
    seed: u64,
) -> Result<DecompositionReport> {
    let set = triple.index_set();
    let gram = triple.gram();
    let (p, q) = (&split.proj_bounded, &split.proj_unbounded);
    let mut rng = rng(seed);
    let mut res = DecompositionResiduals::default();
    let mut worst: Option<(f64, CoeffVector)> = None;

    let inf1 = split.component1.spectral_bounds.map(|b| b.0);
    let sup2 = split.component2.spectral_bounds.map(|b| b.1);
    let constant_one = inf1.is_none_or(|v| v >= 1.0) && sup2.is_none_or(|v| v <= 1.0);

    for _ in 0..samples {
        let f = random_vector(&mut rng, set);
        let h = random_vector(&mut rng, set);
        let before = res.max();

        let n0 = pivot_norm(&f);
        let (pf, qf) = (p.apply(&f)?, q.apply(&f)?);
        let (ph, qh) = (p.apply(&h)?, q.apply(&h)?);
        // (a) projection algebra.
        let dist = |a: &CoeffVector, b: &CoeffVector| -> Result<f64> { Ok(pivot_norm(&a.sub(b)?)) };
        let algebra = [
            dist(&p.apply(&pf)?, &pf)?,
            dist(&q.apply(&qf)?, &qf)?,
            dist(&pf.add(&qf)?, &f)?,
            pivot_norm(&p.apply(&qf)?),
            pivot_norm(&q.apply(&pf)?),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let nh = pivot_norm(&h);
        let herm = (pivot_inner(&pf, &h)? - pivot_inner(&f, &ph)?)
            .norm()
            .max((pivot_inner(&qf, &h)? - pivot_inner(&f, &qh)?).norm());
        res.projection_algebra = res
            .projection_algebra
            .max(rel(algebra, n0))
            .max(rel(herm, n0 * nh));

        for power in [Power::One, Power::Half, Power::MinusOne, Power::MinusHalf] {
            let gf = gram.apply(&f, power)?;
            let scale = pivot_norm(&gf);
            let d = dist(&p.apply(&gf)?, &gram.apply(&pf, power)?)?
                .max(dist(&q.apply(&gf)?, &gram.apply(&qf, power)?)?);
            res.commutation = res.commutation.max(rel(d, scale));
        }

        // (b) contractivity.
        let (fp, fm) = (triple.plus_norm(&f)?, triple.minus_norm(&f)?);
        let norms: [(f64, f64); 2] = [
            (triple.plus_norm(&pf)?, triple.minus_norm(&pf)?),
            (triple.plus_norm(&qf)?, triple.minus_norm(&qf)?),
        ];
        for (a, b) in norms {
            res.contractivity = res.contractivity.max(excess(a, fp)).max(excess(b, fm));
        }

        // (c) orthogonality in all three inner products, (e) cross duality.
        let [(pp, pm), (qp, qm)] = norms;
        let (hp, hm) = (triple.plus_norm(&qh)?, triple.minus_norm(&qh)?);
        let (p0, qh0) = (pivot_norm(&pf), pivot_norm(&qh));
        let orth = [
            rel(pivot_inner(&pf, &qf)?.norm(), p0 * pivot_norm(&qf)),
            rel(triple.plus_inner(&pf, &qf)?.norm(), pp * qp),
            rel(triple.minus_inner(&pf, &qf)?.norm(), pm * qm),
            rel(triple.plus_inner(&pf, &qh)?.norm(), pp * hp),
            rel(triple.minus_inner(&pf, &qh)?.norm(), pm * hm),
        ];
        res.orthogonality = orth.into_iter().fold(res.orthogonality, f64::max);
        let cross = rel(triple.pairing(&pf, &qh)?.norm(), p0 * qh0).max(rel(
            triple.pairing(&qf, &ph)?.norm(),
            pivot_norm(&qf) * pivot_norm(&ph),
        ));
        res.cross_duality = res.cross_duality.max(cross);

        // (d) spectral-bound inequalities.
        let q0 = pivot_norm(&qf);
        if let Some(lo) = inf1 {
            res.spectral_bounds = res.spectral_bounds.max(excess(lo * q0, qp));
        }
        if let Some(hi) = sup2 {
            res.spectral_bounds = res.spectral_bounds.max(excess(pp, hi * p0));
        }
        if constant_one {
            let unit = [
                excess(q0, qp),
                excess(qm, q0),
                excess(pp, p0),
                excess(p0, pm),
            ];
            res.unit_inequalities = unit.into_iter().fold(res.unit_inequalities, f64::max);
        }

        let now = res.max();
        if worst.is_none() || now > before {
            worst = Some((now, f));
        }
    }

    if let (Some(pm), Some(qm)) = (p.matrix(), q.matrix()) {
        let n = pm.nrows();
        let id = DMatrix::<Complex64>::identity(n, n);
        let algebra = [
            (&pm * &pm - &pm).camax(),
            (&qm * &qm - &qm).camax(),
            (&pm - pm.adjoint()).camax(),
            (&qm - qm.adjoint()).camax(),
            (&pm + &qm - &id).camax(),
            (&pm * &qm).camax(),
            (&qm * &pm).camax(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        res.projection_algebra = res.projection_algebra.max(algebra);
    }

    let tolerance = triple.tol();
    let passed = res.max() <= tolerance;
    Ok(DecompositionReport {
        cut: split.cut.intervals().iter().map(|&(a, b)| [a, b]).collect(),
        component1_dim: split.component1.dimension,
        component2_dim: split.component2.dimension,
        component1: component_report(&split.component1),
        component2: component_report(&split.component2),
        samples,
        seed,
        residuals: res,
        tolerance,
        constant_one,
        passed,
        worst: worst.map(|(_, f)| f),
    })
}

/// `f1 + f2` for `f1 ∈ ran E(Δᶜ)` and `f2 ∈ ran E(Δ)`.
pub fn recompose(
    split: &SpectralSplit,
    triple: &QuasiTriple,
    f1: &CoeffVector,
    f2: &CoeffVector,
) -> Result<CoeffVector> {
    let tol = triple.tol();
    let leak = |v: &CoeffVector, wrong: &SpectralProjection| -> Result<f64> {
        Ok(rel(pivot_norm(&wrong.apply(v)?), pivot_norm(v)))
    };
    let l1 = leak(f1, &split.proj_bounded)?;
    if l1 > tol {
        return Err(Error::ComponentLeak(format!(
            "first summand has relative weight {l1:e} on {} (component 2)",
            split.component2.description
        )));
    }
    let l2 = leak(f2, &split.proj_unbounded)?;
    if l2 > tol {
        return Err(Error::ComponentLeak(format!(
            "second summand has relative weight {l2:e} on {} (component 1)",
            split.component1.description
        )));
    }
    f1.add(f2)
}
