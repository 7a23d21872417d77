//! The quasi Gelfand triple engine.
//!
//! Embeddings `ι₊, ι₋` act as the identity on coefficient representatives:
//! a finitely supported vector is simultaneously an element of `D₊`, `X₀` and
//! `D₋`, and only the norm it is measured in changes.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gram::{GramOperator, GramSpec, Power};
use crate::sampling::{random_vector, random_vector_near, rng};
use crate::tolerance::TolerancePolicy;
use crate::vector::{pivot_inner, pivot_norm, CoeffVector, IndexSet, Scalar};

/// Number of extra indices a random oracle probe may add to the support of
/// the functional being measured.
pub const ORACLE_EXTRA_INDICES: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiTriple {
    gram: GramOperator,
    tolerance: TolerancePolicy,
}

/// Direction of the duality map `Ψ : X₋ → X₊`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `Ψ g = G⁻¹ g`.
    Forward,
    /// `Ψ⁻¹ f = G f`.
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MembershipVerdict {
    pub in_d_plus: bool,
    pub in_d_minus: bool,
    pub plus_norm: f64,
    pub minus_norm: f64,
}

/// Result of a brute-force evaluation of a dual norm `sup |⟨v, u⟩₀| / ‖u‖`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleOutcome {
    /// Largest ratio over all candidates.
    pub value: f64,
    /// Closed-form value of the norm.
    pub closed_form: f64,
    /// Ratio at the analytic maximizer.
    pub at_maximizer: f64,
    /// Largest ratio among the random probes only.
    pub max_probe: f64,
    pub probes: usize,
}

impl OracleOutcome {
    /// No candidate exceeds the closed form by more than `slack` (relative)
    /// and the maximizer attains it within `tol` (relative).
    pub fn consistent(&self, slack: f64, tol: f64) -> bool {
        let scale = self.closed_form.max(f64::MIN_POSITIVE);
        self.value <= self.closed_form + slack * scale
            && (self.at_maximizer - self.closed_form).abs() <= tol * scale
    }
}

/// `x = plus + minus` with `plus ∈ D₊` and `minus ∈ D₋`.
#[derive(Debug, Clone, PartialEq)]
pub struct PivotSplit {
    pub plus: CoeffVector,
    pub minus: CoeffVector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingReport {
    pub samples: usize,
    /// `max |⟨g,f⟩_{X₋,X₊} − ⟨g,f⟩₀|`, relative to `‖g‖₀‖f‖₀`.
    pub max_pivot_residual: f64,
    /// `max |⟨g,f⟩_{X₋,X₊} − ⟨Ψg,f⟩₊|`, relative to `‖g‖₀‖f‖₀`.
    pub max_psi_residual: f64,
    pub pivot_tolerance: f64,
    pub psi_tolerance: f64,
    /// Pair attaining the largest residual.
    pub worst: Option<(CoeffVector, CoeffVector)>,
}

impl PairingReport {
    pub fn passed(&self) -> bool {
        self.max_pivot_residual <= self.pivot_tolerance
            && self.max_psi_residual <= self.psi_tolerance
    }
}

impl QuasiTriple {
    pub fn new(gram: GramOperator, tolerance: TolerancePolicy) -> Result<Self> {
        tolerance.validate()?;
        Ok(Self { gram, tolerance })
    }

    pub fn from_gram(gram: GramOperator) -> Self {
        Self {
            gram,
            tolerance: TolerancePolicy::default(),
        }
    }

    pub fn from_spec(spec: GramSpec, tolerance: TolerancePolicy) -> Result<Self> {
        tolerance.validate()?;
        let gram = GramOperator::from_spec_with_tol(spec, tolerance.algebraic_tol)?;
        Ok(Self { gram, tolerance })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let json: TripleJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_spec(json.gram, json.tolerance)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("triple serializes")
    }

    pub fn gram(&self) -> &GramOperator {
        &self.gram
    }

    pub fn tolerance(&self) -> &TolerancePolicy {
        &self.tolerance
    }

    pub fn index_set(&self) -> IndexSet {
        self.gram.index_set()
    }

    pub fn with_tolerance(&self, tolerance: TolerancePolicy) -> Result<Self> {
        Self::new(self.gram.clone(), tolerance)
    }

    /// The triple with Gram operator `G⁻¹`, which swaps the roles of `X₊` and
    /// `X₋`.
    pub fn inverse(&self) -> Self {
        Self {
            gram: self.gram.inverse(),
            tolerance: self.tolerance,
        }
    }

    /// Algebraic tolerance scaled by `κ(G)` (factor 1 for unbounded families).
    pub fn tol(&self) -> f64 {
        self.tolerance.algebraic(self.gram.condition_number())
    }

    pub fn oracle_tol(&self) -> f64 {
        self.tolerance.oracle(self.gram.condition_number())
    }

    pub fn basis(&self, index: i64) -> Result<CoeffVector> {
        CoeffVector::basis(self.index_set(), index)
    }

    /// `‖f‖₊ = ‖G^{1/2} f‖₀`.
    pub fn plus_norm(&self, f: &CoeffVector) -> Result<f64> {
        Ok(pivot_norm(&self.gram.apply(f, Power::Half)?))
    }

    /// `‖g‖₋ = ‖G^{-1/2} g‖₀`.
    pub fn minus_norm(&self, g: &CoeffVector) -> Result<f64> {
        Ok(pivot_norm(&self.gram.apply(g, Power::MinusHalf)?))
    }

    /// `⟨f, h⟩₊ = ⟨G f, h⟩₀`.
    pub fn plus_inner(&self, f: &CoeffVector, h: &CoeffVector) -> Result<Scalar> {
        pivot_inner(&self.gram.apply(f, Power::One)?, h)
    }

    /// `⟨g, h⟩₋ = ⟨G⁻¹ g, h⟩₀`.
    pub fn minus_inner(&self, g: &CoeffVector, h: &CoeffVector) -> Result<Scalar> {
        pivot_inner(&self.gram.apply(g, Power::MinusOne)?, h)
    }

    /// `⟨g, f⟩_{X₋,X₊}`, which on representatives is the pivot inner product.
    pub fn pairing(&self, g: &CoeffVector, f: &CoeffVector) -> Result<Scalar> {
        pivot_inner(g, f)
    }

    pub fn duality_map_psi(&self, v: &CoeffVector, direction: Direction) -> Result<CoeffVector> {
        match direction {
            Direction::Forward => self.gram.apply(v, Power::MinusOne),
            Direction::Inverse => self.gram.apply(v, Power::One),
        }
    }

    pub fn membership(&self, f: &CoeffVector) -> Result<MembershipVerdict> {
        let plus_norm = self.plus_norm(f)?;
        let minus_norm = self.minus_norm(f)?;
        Ok(MembershipVerdict {
            in_d_plus: plus_norm.is_finite(),
            in_d_minus: minus_norm.is_finite(),
            plus_norm,
            minus_norm,
        })
    }

    /// Brute-force `sup_f |⟨g,f⟩₀| / ‖f‖₊` over `G⁻¹g` and `trials` random
    /// probes supported near `supp g`.
    pub fn minus_norm_oracle(
        &self,
        g: &CoeffVector,
        trials: usize,
        seed: u64,
    ) -> Result<OracleOutcome> {
        if g.is_empty() {
            return Err(Error::EmptyVector);
        }
        self.index_set().ensure_same(&g.index_set())?;
        let closed_form = self.minus_norm(g)?;
        let ratio = |f: &CoeffVector| -> Result<f64> {
            Ok(self.pairing(g, f)?.norm() / self.plus_norm(f)?)
        };
        let maximizer = self.duality_map_psi(g, Direction::Forward)?;
        let at_maximizer = ratio(&maximizer)?;
        let support: Vec<i64> = g.support().collect();
        let mut rng = rng(seed);
        let mut max_probe = 0.0_f64;
        for _ in 0..trials {
            let f = random_vector_near(&mut rng, g.index_set(), &support, ORACLE_EXTRA_INDICES);
            max_probe = max_probe.max(ratio(&f)?);
        }
        Ok(OracleOutcome {
            value: at_maximizer.max(max_probe),
            closed_form,
            at_maximizer,
            max_probe,
            probes: trials,
        })
    }

    /// Splits `x = f + g` with `g = (I + G⁻¹)⁻¹ x ∈ D₋` and
    /// `f = G⁻¹ g ∈ D₊`. The parts add back to `x` bit for bit at every
    /// coordinate where [`exact_sum_feasible`] allows it, which includes all
    /// coordinates of a real diagonal operator.
    pub fn pivot_split(&self, x: &CoeffVector) -> Result<PivotSplit> {
        let g = self.gram.apply_fn(x, |l| 1.0 / (1.0 + 1.0 / l))?;
        let (plus, minus) = complement_exactly(x, &g)?;
        Ok(PivotSplit { plus, minus })
    }

    /// Draws random pairs and compares the dual pairing against the pivot
    /// inner product and against `⟨Ψg, f⟩₊`.
    pub fn check_pairing_identity(&self, samples: usize, seed: u64) -> Result<PairingReport> {
        let set = self.index_set();
        let mut rng = rng(seed);
        let mut report = PairingReport {
            samples,
            max_pivot_residual: 0.0,
            max_psi_residual: 0.0,
            pivot_tolerance: self.tolerance.algebraic_tol,
            psi_tolerance: self.tol(),
            worst: None,
        };
        let mut worst = -1.0;
        for _ in 0..samples {
            let g = random_vector(&mut rng, set);
            let f = random_vector(&mut rng, set);
            let scale = (pivot_norm(&g) * pivot_norm(&f)).max(f64::MIN_POSITIVE);
            let dual = self.pairing(&g, &f)?;
            let pivot = (dual - pivot_inner(&g, &f)?).norm() / scale;
            let psi_g = self.duality_map_psi(&g, Direction::Forward)?;
            let psi = (dual - self.plus_inner(&psi_g, &f)?).norm() / scale;
            report.max_pivot_residual = report.max_pivot_residual.max(pivot);
            report.max_psi_residual = report.max_psi_residual.max(psi);
            if pivot.max(psi) > worst {
                worst = pivot.max(psi);
                report.worst = Some((g, f));
            }
        }
        Ok(report)
    }
}

/// Returns `(x − g', g')` where `g'` is `g` nudged so that the two parts add
/// back to `x` exactly in floating point.
pub(crate) fn complement_exactly(
    x: &CoeffVector,
    g: &CoeffVector,
) -> Result<(CoeffVector, CoeffVector)> {
    x.index_set().ensure_same(&g.index_set())?;
    let indices: BTreeSet<i64> = x.support().chain(g.support()).collect();
    let mut first = Vec::with_capacity(indices.len());
    let mut second = Vec::with_capacity(indices.len());
    for i in indices {
        let (xi, gi) = (x.get(i), g.get(i));
        let (fr, gr) = exact_complement(xi.re, gi.re);
        let (fi, gim) = exact_complement(xi.im, gi.im);
        first.push((i, Complex64::new(fr, fi)));
        second.push((i, Complex64::new(gr, gim)));
    }
    Ok((
        CoeffVector::from_entries(x.index_set(), first)?,
        CoeffVector::from_entries(x.index_set(), second)?,
    ))
}

/// Spacing of the doubles in the binade of `x`.
pub fn quantum(x: f64) -> f64 {
    let biased = ((x.to_bits() >> 52) & 0x7ff) as i32;
    let e = biased.max(1) - 1075;
    if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (e + 1074))
    }
}

/// Whether doubles near `a` and `b` can add to `x` without rounding: the
/// smaller part must live on a grid no coarser than that of `x`.
pub fn exact_sum_feasible(x: f64, a: f64, b: f64) -> bool {
    x == 0.0 || quantum(x) >= quantum(a.abs().min(b.abs()))
}

/// Adjusts one part so that `fl(f + g) == x`, keeping the larger part fixed.
/// Succeeds whenever [`exact_sum_feasible`] holds; otherwise returns
/// `(fl(x − g), g)`, whose sum is off by at most half a spacing of the parts.
fn exact_complement(x: f64, g: f64) -> (f64, f64) {
    let f = x - g;
    if f + g == x {
        return (f, g);
    }
    let g2 = x - f;
    if f + g2 == x {
        return (f, g2);
    }
    (f, g)
}

/// Reconstructs the Gram operator of a triple from its plus-form: `form(i, j)`
/// must return `⟨eᵢ, eⱼ⟩₊` for basis indices `1..=dim`, and the result
/// satisfies `⟨G eᵢ, eⱼ⟩₀ = form(i, j)`.
pub fn recover_gram(
    form: impl Fn(i64, i64) -> Scalar,
    dim: usize,
    tol: f64,
) -> Result<GramOperator> {
    if dim == 0 {
        return Err(Error::DimensionMismatch(
            "recover_gram: dimension must be positive".into(),
        ));
    }
    // G_rc = ⟨G e_c, e_r⟩₀ = form(c, r).
    let matrix = DMatrix::from_fn(dim, dim, |r, c| form(c as i64 + 1, r as i64 + 1));
    GramOperator::from_spec_with_tol(GramSpec::Dense { matrix }, tol)
}

/// Plus-form of a triple over a finite index set, in the shape expected by
/// [`recover_gram`].
pub fn plus_form(triple: &QuasiTriple) -> impl Fn(i64, i64) -> Scalar + '_ {
    move |i, j| {
        let ei = triple.basis(i).expect("basis index within the triple");
        let ej = triple.basis(j).expect("basis index within the triple");
        triple.plus_inner(&ei, &ej).expect("same index set")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleJson {
    gram: GramSpec,
    #[serde(default)]
    tolerance: TolerancePolicy,
}

impl Serialize for QuasiTriple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TripleJson {
            gram: self.gram.to_spec(),
            tolerance: self.tolerance,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuasiTriple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = TripleJson::deserialize(deserializer)?;
        QuasiTriple::from_spec(json.gram, json.tolerance).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::WeightSpec;
    use approx::assert_relative_eq;

    fn quarter() -> QuasiTriple {
        QuasiTriple::from_gram(GramOperator::diagonal(vec![4.0, 1.0, 0.25]).unwrap())
    }

    fn c(re: f64, im: f64) -> Scalar {
        Complex64::new(re, im)
    }

    #[test]
    fn norm_examples() {
        let id = QuasiTriple::from_gram(GramOperator::identity(3));
        let e1 = id.basis(1).unwrap();
        assert_eq!(id.plus_norm(&e1).unwrap(), 1.0);
        assert_eq!(id.minus_norm(&e1).unwrap(), 1.0);
        let q = quarter();
        assert_eq!(q.plus_norm(&q.basis(1).unwrap()).unwrap(), 2.0);
        assert_eq!(q.minus_norm(&q.basis(1).unwrap()).unwrap(), 0.5);
        assert_eq!(q.minus_norm(&q.basis(3).unwrap()).unwrap(), 2.0);
        let ell = QuasiTriple::from_gram(GramOperator::paper_ell2());
        let f = CoeffVector::from_real(
            IndexSet::SymmetricIntegers,
            [(-1, 1.0), (-2, 1.0), (-3, 1.0)],
        )
        .unwrap();
        assert_relative_eq!(ell.plus_norm(&f).unwrap(), 7.0 / 6.0, max_relative = 1e-15);
    }

    #[test]
    fn oracle_examples() {
        let id = QuasiTriple::from_gram(GramOperator::identity(3));
        let out = id.minus_norm_oracle(&id.basis(1).unwrap(), 100, 0).unwrap();
        assert_relative_eq!(out.value, 1.0, max_relative = 1e-15);
        let q = quarter();
        let out = q.minus_norm_oracle(&q.basis(3).unwrap(), 1000, 42).unwrap();
        assert!((out.value - 2.0).abs() < 1e-9);
        assert!(out.consistent(1e-12, 1e-9));
        let ell = QuasiTriple::from_gram(GramOperator::paper_ell2());
        let out = ell
            .minus_norm_oracle(&ell.basis(-2).unwrap(), 1000, 7)
            .unwrap();
        assert!((out.value - 2.0).abs() < 1e-9);
        assert!(matches!(
            q.minus_norm_oracle(&CoeffVector::zero(IndexSet::Finite(3)), 10, 0),
            Err(Error::EmptyVector)
        ));
    }

    #[test]
    fn pairing_examples() {
        let q = quarter();
        let (e1, e2) = (q.basis(1).unwrap(), q.basis(2).unwrap());
        assert_eq!(q.pairing(&e1, &e1).unwrap(), c(1.0, 0.0));
        assert_eq!(q.pairing(&e1, &e2).unwrap(), c(0.0, 0.0));
        let g = q.basis(3).unwrap().scale(c(2.0, 0.0));
        let f = q.basis(3).unwrap().scale(c(1.0, 1.0));
        assert_eq!(q.pairing(&g, &f).unwrap(), c(2.0, -2.0));
    }

    #[test]
    fn psi_examples() {
        let q = quarter();
        let fwd = q
            .duality_map_psi(&q.basis(1).unwrap(), Direction::Forward)
            .unwrap();
        assert_eq!(fwd, q.basis(1).unwrap().scale(c(0.25, 0.0)));
        let inv = q
            .duality_map_psi(&q.basis(3).unwrap(), Direction::Inverse)
            .unwrap();
        assert_eq!(inv, q.basis(3).unwrap().scale(c(0.25, 0.0)));
    }

    #[test]
    fn pivot_split_examples() {
        let id = QuasiTriple::from_gram(GramOperator::identity(3));
        let s = id.pivot_split(&id.basis(1).unwrap()).unwrap();
        assert_eq!(s.plus, id.basis(1).unwrap().scale(c(0.5, 0.0)));
        assert_eq!(s.minus, s.plus);

        let single = QuasiTriple::from_gram(GramOperator::diagonal(vec![4.0]).unwrap());
        let s = single.pivot_split(&single.basis(1).unwrap()).unwrap();
        assert_relative_eq!(s.minus.get(1).re, 0.8, max_relative = 1e-15);
        assert_relative_eq!(s.plus.get(1).re, 0.2, max_relative = 1e-15);

        let q = quarter();
        let x =
            CoeffVector::from_real(IndexSet::Finite(3), [(1, 1.0), (2, 1.0), (3, 1.0)]).unwrap();
        let s = q.pivot_split(&x).unwrap();
        for (i, g, f) in [(1, 0.8, 0.2), (2, 0.5, 0.5), (3, 0.2, 0.8)] {
            assert_relative_eq!(s.minus.get(i).re, g, max_relative = 1e-15);
            assert_relative_eq!(s.plus.get(i).re, f, max_relative = 1e-15);
        }
        assert_eq!(s.plus.add(&s.minus).unwrap(), x);
    }

    #[test]
    fn recover_gram_examples() {
        let id = recover_gram(
            |i, j| if i == j { 1.0.into() } else { 0.0.into() },
            3,
            1e-12,
        )
        .unwrap();
        assert_eq!(id.matrix().unwrap(), DMatrix::identity(3, 3));
        let q = quarter();
        let g = recover_gram(plus_form(&q), 3, 1e-12).unwrap();
        assert_eq!(g.matrix().unwrap(), q.gram().matrix().unwrap());
        let err = recover_gram(
            |i, j| {
                if i == 1 && j == 2 {
                    1.0.into()
                } else {
                    0.5.into()
                }
            },
            2,
            1e-12,
        );
        assert!(matches!(err, Err(Error::NotSelfAdjoint { .. })));
        let err = recover_gram(
            |i, j| if i == j { 1.0.into() } else { 2.0.into() },
            2,
            1e-12,
        );
        assert!(matches!(err, Err(Error::NotInjective { .. })));
    }

    #[test]
    fn pairing_identity_reports() {
        let id = QuasiTriple::from_gram(GramOperator::identity(3));
        let r = id.check_pairing_identity(100, 0).unwrap();
        assert_eq!(r.max_pivot_residual, 0.0);
        assert_eq!(r.max_psi_residual, 0.0);
        let r = quarter().check_pairing_identity(1000, 1).unwrap();
        assert!(r.passed());
        assert!(r.max_psi_residual <= 1e-12 * 16.0);
    }

    #[test]
    fn membership_of_finite_support() {
        let ell = QuasiTriple::from_gram(GramOperator::paper_ell2());
        let v = ell.membership(&ell.basis(5).unwrap()).unwrap();
        assert!(v.in_d_plus && v.in_d_minus);
        assert_eq!((v.plus_norm, v.minus_norm), (5.0, 0.2));
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"gram":{"kind":"finite_diagonal","lambdas":[4,1,0.25]},
                       "tolerance":{"algebraic":1e-12,"oracle":1e-9,"condition_scale":true}}"#;
        let t = QuasiTriple::from_json(text).unwrap();
        assert_eq!(t, quarter());
        assert_eq!(QuasiTriple::from_json(&t.to_json()).unwrap(), t);
        let analytic =
            QuasiTriple::from_json(r#"{"gram":{"kind":"analytic","weight":"paper_ell2"}}"#)
                .unwrap();
        assert_eq!(analytic.gram().weight(), Some(&WeightSpec::PaperEll2));
        assert!(
            QuasiTriple::from_json(r#"{"gram":{"kind":"finite_diagonal","lambdas":[1,0]}}"#)
                .is_err()
        );
    }
}
