//! The intersection space `Z₊ = D₊ ∩ D₋` and the hull space `Z₋ = X₊ + X₋`.
//!
//! `Z₊` carries `‖z‖²_{Z₊} = ‖z‖₊² + ‖z‖₋²`, whose Gram operator is
//! `G + G⁻¹`. Its duality map is `Φ = (G + G⁻¹)⁻¹`, and every element of `Z₋`
//! is represented by a pair `(f, g)` standing for `f + g` with `f ∈ X₊` and
//! `g ∈ X₋`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{random_vector_near, rng};
use crate::triple::{complement_exactly, OracleOutcome, QuasiTriple, ORACLE_EXTRA_INDICES};
use crate::vector::{pivot_inner, pivot_norm, CoeffVector};

/// Spectral function of `Φ = (G + G⁻¹)⁻¹`.
fn phi(l: f64) -> f64 {
    1.0 / (l + 1.0 / l)
}

/// Spectral function of `G⁻¹Φ = (G² + 1)⁻¹`.
fn plus_share(l: f64) -> f64 {
    1.0 / (l * l + 1.0)
}

/// Spectral function of `GΦ = G²(G² + 1)⁻¹`.
fn minus_share(l: f64) -> f64 {
    1.0 / (1.0 + 1.0 / (l * l))
}

/// An element of `Z₊` with its norm.
#[derive(Debug, Clone, PartialEq)]
pub struct ZPlusElement {
    vector: CoeffVector,
    z_plus_norm: f64,
}

impl ZPlusElement {
    pub fn new(triple: &QuasiTriple, vector: CoeffVector) -> Result<Self> {
        let z_plus_norm = z_plus_norm(triple, &vector)?;
        Ok(Self {
            vector,
            z_plus_norm,
        })
    }

    pub fn vector(&self) -> &CoeffVector {
        &self.vector
    }

    pub fn z_plus_norm(&self) -> f64 {
        self.z_plus_norm
    }
}

/// `h = plus_part + minus_part ∈ Z₋`. The representation is unique only up to
/// shifting an element of `Z₊` from one part to the other.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZMinusElement {
    pub plus_part: CoeffVector,
    pub minus_part: CoeffVector,
}

impl ZMinusElement {
    pub fn new(plus_part: CoeffVector, minus_part: CoeffVector) -> Result<Self> {
        plus_part.index_set().ensure_same(&minus_part.index_set())?;
        Ok(Self {
            plus_part,
            minus_part,
        })
    }

    /// `h` seen as `(h, 0)`.
    pub fn from_plus(h: CoeffVector) -> Self {
        let zero = CoeffVector::zero(h.index_set());
        Self {
            plus_part: h,
            minus_part: zero,
        }
    }

    /// `h` seen as `(0, h)`.
    pub fn from_minus(h: CoeffVector) -> Self {
        let zero = CoeffVector::zero(h.index_set());
        Self {
            plus_part: zero,
            minus_part: h,
        }
    }

    /// The represented vector `f + g`.
    pub fn combined(&self) -> Result<CoeffVector> {
        self.plus_part.add(&self.minus_part)
    }

    /// Whether two pairs represent the same element of `Z₋`, decided by
    /// comparing their canonical splits within the triple's tolerance.
    pub fn same_element(&self, other: &Self, triple: &QuasiTriple) -> Result<bool> {
        let a = canonical_split(triple, &self.combined()?)?;
        let b = canonical_split(triple, &other.combined()?)?;
        let scale = pivot_norm(&a.plus_part)
            .max(pivot_norm(&a.minus_part))
            .max(f64::MIN_POSITIVE);
        let dp = pivot_norm(&a.plus_part.sub(&b.plus_part)?);
        let dm = pivot_norm(&a.minus_part.sub(&b.minus_part)?);
        Ok(dp.max(dm) <= triple.tol() * scale)
    }
}

/// `‖z‖_{Z₊} = (‖z‖₊² + ‖z‖₋²)^{1/2}`.
pub fn z_plus_norm(triple: &QuasiTriple, z: &CoeffVector) -> Result<f64> {
    Ok(triple.plus_norm(z)?.hypot(triple.minus_norm(z)?))
}

/// `⟨z, w⟩_{Z₊} = ⟨z, w⟩₊ + ⟨z, w⟩₋`.
pub fn z_plus_inner(
    triple: &QuasiTriple,
    z: &CoeffVector,
    w: &CoeffVector,
) -> Result<crate::Scalar> {
    Ok(triple.plus_inner(z, w)? + triple.minus_inner(z, w)?)
}

/// `‖h‖_{Z₋} = ‖(G + G⁻¹)^{−1/2}(f + g)‖₀`.
pub fn z_minus_norm(triple: &QuasiTriple, h: &ZMinusElement) -> Result<f64> {
    z_minus_norm_of(triple, &h.combined()?)
}

fn z_minus_norm_of(triple: &QuasiTriple, h: &CoeffVector) -> Result<f64> {
    Ok(pivot_norm(&triple.gram().apply_fn(h, |l| phi(l).sqrt())?))
}

/// `Φh = (G + G⁻¹)⁻¹ h`, the maximizer of the dual-norm quotient.
pub fn duality_map_phi(triple: &QuasiTriple, h: &CoeffVector) -> Result<CoeffVector> {
    triple.gram().apply_fn(h, phi)
}

/// Brute-force `sup_z |⟨f+g, z⟩₀| / ‖z‖_{Z₊}` over `Φ(f+g)` and random probes.
pub fn z_minus_norm_oracle(
    triple: &QuasiTriple,
    h: &ZMinusElement,
    trials: usize,
    seed: u64,
) -> Result<OracleOutcome> {
    let v = h.combined()?;
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    triple.index_set().ensure_same(&v.index_set())?;
    let closed_form = z_minus_norm_of(triple, &v)?;
    let ratio = |z: &CoeffVector| -> Result<f64> {
        Ok(pivot_inner(&v, z)?.norm() / z_plus_norm(triple, z)?)
    };
    let at_maximizer = ratio(&duality_map_phi(triple, &v)?)?;
    let support: Vec<i64> = v.support().collect();
    let mut rng = rng(seed);
    let mut max_probe = 0.0_f64;
    for _ in 0..trials {
        let z = random_vector_near(&mut rng, v.index_set(), &support, ORACLE_EXTRA_INDICES);
        max_probe = max_probe.max(ratio(&z)?);
    }
    Ok(OracleOutcome {
        value: at_maximizer.max(max_probe),
        closed_form,
        at_maximizer,
        max_probe,
        probes: trials,
    })
}

/// `h = ΨΦh + Ψ⁻¹Φh`: `plus_part = G⁻¹Φh`, `minus_part = GΦh`. The parts add
/// back to `h` exactly.
pub fn canonical_split(triple: &QuasiTriple, h: &CoeffVector) -> Result<ZMinusElement> {
    let minus = triple.gram().apply_fn(h, minus_share)?;
    let (plus_part, minus_part) = complement_exactly(h, &minus)?;
    Ok(ZMinusElement {
        plus_part,
        minus_part,
    })
}

/// `‖f + z‖₊² + ‖g − z‖₋²`, the quantity minimized by [`optimal_split`].
pub fn split_objective(
    triple: &QuasiTriple,
    f: &CoeffVector,
    g: &CoeffVector,
    z: &CoeffVector,
) -> Result<f64> {
    let a = triple.plus_norm(&f.add(z)?)?;
    let b = triple.minus_norm(&g.sub(z)?)?;
    Ok(a * a + b * b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalSplit {
    /// Minimizer `z*` of [`split_objective`].
    pub shift: CoeffVector,
    /// `√(min objective)`, which equals `‖f + g‖_{Z₋}`.
    pub value: f64,
}

/// Solves `(G + G⁻¹) z = G⁻¹g − Gf`, i.e. `z = (G² + 1)⁻¹g − G²(G² + 1)⁻¹f`.
pub fn optimal_split(
    triple: &QuasiTriple,
    f: &CoeffVector,
    g: &CoeffVector,
) -> Result<OptimalSplit> {
    f.index_set().ensure_same(&g.index_set())?;
    let from_g = triple.gram().apply_fn(g, plus_share)?;
    let from_f = triple.gram().apply_fn(f, minus_share)?;
    let shift = from_g.sub(&from_f)?;
    let value = split_objective(triple, f, g, &shift)?.sqrt();
    Ok(OptimalSplit { shift, value })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionVerdict {
    /// `ψ_{X₊}(f) = ψ_{X₋}(g)` as functionals on `Z₊`.
    pub equal: bool,
    /// A basis probe `eᵢ ∈ Z₊` on which the two functionals differ.
    pub witness_index: Option<i64>,
    /// `|⟨f − g, eᵢ⟩₀|` at the witness.
    pub witness_gap: Option<f64>,
    /// `‖f‖_{Z₊}` when the functionals agree, certifying `f ∈ Z₊`.
    pub z_plus_norm: Option<f64>,
}

/// Decides whether `f ∈ X₊` and `g ∈ X₋` define the same element of `Z₋`.
/// Basis vectors lie in `Z₊`, so the functionals agree iff the coefficients
/// agree.
pub fn intersection_witness(
    triple: &QuasiTriple,
    f: &CoeffVector,
    g: &CoeffVector,
) -> Result<IntersectionVerdict> {
    triple.index_set().ensure_same(&f.index_set())?;
    let diff = f.sub(g)?;
    let first = diff.iter().next();
    match first {
        None => Ok(IntersectionVerdict {
            equal: true,
            witness_index: None,
            witness_gap: None,
            z_plus_norm: Some(z_plus_norm(triple, f)?),
        }),
        Some((i, v)) => Ok(IntersectionVerdict {
            equal: false,
            witness_index: Some(i),
            witness_gap: Some(v.norm()),
            z_plus_norm: None,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::GramOperator;
    use crate::vector::IndexSet;
    use approx::assert_relative_eq;

    fn quarter() -> QuasiTriple {
        QuasiTriple::from_gram(GramOperator::diagonal(vec![4.0, 1.0, 0.25]).unwrap())
    }

    fn single() -> QuasiTriple {
        QuasiTriple::from_gram(GramOperator::diagonal(vec![4.0]).unwrap())
    }

    fn id() -> QuasiTriple {
        QuasiTriple::from_gram(GramOperator::identity(3))
    }

    #[test]
    fn z_plus_examples() {
        assert_relative_eq!(
            z_plus_norm(&id(), &id().basis(1).unwrap()).unwrap(),
            2f64.sqrt()
        );
        let q = quarter();
        assert_relative_eq!(
            z_plus_norm(&q, &q.basis(1).unwrap()).unwrap(),
            17f64.sqrt() / 2.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(z_plus_norm(&q, &q.basis(2).unwrap()).unwrap(), 2f64.sqrt());
    }

    #[test]
    fn z_minus_examples() {
        let h = ZMinusElement::from_plus(id().basis(1).unwrap());
        assert_relative_eq!(
            z_minus_norm(&id(), &h).unwrap(),
            0.5f64.sqrt(),
            max_relative = 1e-15
        );
        let q = quarter();
        let e1 = q.basis(1).unwrap();
        let h = ZMinusElement::from_plus(e1.clone());
        assert_relative_eq!(
            z_minus_norm(&q, &h).unwrap(),
            2.0 / 17f64.sqrt(),
            max_relative = 1e-15
        );
        let cancel = ZMinusElement::new(e1.clone(), e1.scale((-1.0).into())).unwrap();
        assert_eq!(z_minus_norm(&q, &cancel).unwrap(), 0.0);
    }

    #[test]
    fn z_minus_oracle_examples() {
        let h = ZMinusElement::from_plus(id().basis(1).unwrap());
        let out = z_minus_norm_oracle(&id(), &h, 100, 0).unwrap();
        assert!((out.value - 0.5f64.sqrt()).abs() < 1e-9);
        let q = quarter();
        let out = z_minus_norm_oracle(&q, &ZMinusElement::from_plus(q.basis(1).unwrap()), 1000, 3)
            .unwrap();
        assert!((out.value - 2.0 / 17f64.sqrt()).abs() < 1e-9);
        let h13 = CoeffVector::from_real(IndexSet::Finite(3), [(1, 1.0), (3, 1.0)]).unwrap();
        let out = z_minus_norm_oracle(&q, &ZMinusElement::from_plus(h13), 1000, 9).unwrap();
        assert!((out.value - (8.0f64 / 17.0).sqrt()).abs() < 1e-9);
        assert!(out.consistent(1e-12, 1e-9));
        let empty = ZMinusElement::from_plus(CoeffVector::zero(IndexSet::Finite(3)));
        assert!(matches!(
            z_minus_norm_oracle(&q, &empty, 1, 0),
            Err(Error::EmptyVector)
        ));
    }

    #[test]
    fn canonical_split_examples() {
        let s = canonical_split(&id(), &id().basis(1).unwrap()).unwrap();
        assert_eq!(s.plus_part.get(1).re, 0.5);
        assert_eq!(s.minus_part.get(1).re, 0.5);
        let t = single();
        let s = canonical_split(&t, &t.basis(1).unwrap()).unwrap();
        assert_relative_eq!(s.plus_part.get(1).re, 1.0 / 17.0, max_relative = 1e-14);
        assert_relative_eq!(s.minus_part.get(1).re, 16.0 / 17.0, max_relative = 1e-15);
        let q = quarter();
        let s = canonical_split(&q, &q.basis(2).unwrap()).unwrap();
        assert_eq!((s.plus_part.get(2).re, s.minus_part.get(2).re), (0.5, 0.5));
        assert_eq!(s.combined().unwrap(), q.basis(2).unwrap());
    }

    #[test]
    fn canonical_split_pythagoras() {
        let q = quarter();
        let h =
            CoeffVector::from_real(IndexSet::Finite(3), [(1, 1.0), (2, -2.0), (3, 0.5)]).unwrap();
        let s = canonical_split(&q, &h).unwrap();
        let lhs = z_minus_norm(&q, &ZMinusElement::from_plus(h))
            .unwrap()
            .powi(2);
        let rhs = q.plus_norm(&s.plus_part).unwrap().powi(2)
            + q.minus_norm(&s.minus_part).unwrap().powi(2);
        assert_relative_eq!(lhs, rhs, max_relative = 1e-14);
    }

    #[test]
    fn optimal_split_examples() {
        let t = id();
        let zero = CoeffVector::zero(IndexSet::Finite(3));
        let s = optimal_split(&t, &t.basis(1).unwrap(), &zero).unwrap();
        assert_eq!(s.shift, t.basis(1).unwrap().scale((-0.5).into()));
        assert_relative_eq!(s.value, 0.5f64.sqrt(), max_relative = 1e-15);

        let t = single();
        let (one, none) = (t.basis(1).unwrap(), CoeffVector::zero(IndexSet::Finite(1)));
        let s = optimal_split(&t, &one, &none).unwrap();
        assert_relative_eq!(s.shift.get(1).re, -16.0 / 17.0, max_relative = 1e-15);
        assert_relative_eq!(s.value, 2.0 / 17f64.sqrt(), max_relative = 1e-15);
        let s = optimal_split(&t, &none, &one).unwrap();
        assert_relative_eq!(s.shift.get(1).re, 1.0 / 17.0, max_relative = 1e-14);
        assert_relative_eq!(s.value, 2.0 / 17f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn representation_independence() {
        let q = quarter();
        let h = CoeffVector::from_real(IndexSet::Finite(3), [(1, 3.0), (3, -1.0)]).unwrap();
        let a = ZMinusElement::from_plus(h.clone());
        let b = ZMinusElement::from_minus(h.clone());
        let c = canonical_split(&q, &h).unwrap();
        assert!(a.same_element(&b, &q).unwrap());
        assert!(a.same_element(&c, &q).unwrap());
        let other = ZMinusElement::from_plus(q.basis(2).unwrap());
        assert!(!a.same_element(&other, &q).unwrap());
    }

    #[test]
    fn intersection_examples() {
        let q = quarter();
        let (e1, e2) = (q.basis(1).unwrap(), q.basis(2).unwrap());
        let v = intersection_witness(&q, &e1, &e1).unwrap();
        assert!(v.equal);
        assert_relative_eq!(
            v.z_plus_norm.unwrap(),
            17f64.sqrt() / 2.0,
            max_relative = 1e-15
        );
        let v = intersection_witness(&q, &e1, &e2).unwrap();
        assert!(!v.equal);
        assert_eq!(v.witness_index, Some(1));
        let v = intersection_witness(&q, &e1, &e1.scale(2.0.into())).unwrap();
        assert!(!v.equal);
        assert_eq!(v.witness_gap, Some(1.0));
    }

    #[test]
    fn json_form() {
        let q = quarter();
        let h = canonical_split(&q, &q.basis(1).unwrap()).unwrap();
        let text = serde_json::to_string(&h).unwrap();
        assert!(text.starts_with(r#"{"plus_part":"#));
        assert_eq!(serde_json::from_str::<ZMinusElement>(&text).unwrap(), h);
    }
}
