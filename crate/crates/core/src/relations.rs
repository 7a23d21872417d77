//! Finite-dimensional linear relations and dual pairs.
//!
//! In finite dimension every relation is closed and every operator bounded,
//! so closure, closability and core statements reduce to identities; the
//! checks here exercise the algebraic content (annihilators, adjoints under
//! arbitrary complete pairings, the von Neumann operators `I + T*T`, and the
//! Cesàro selection behind weak-to-strong upgrades).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gram::hermitize;
use crate::vector::{pivot_inner, CoeffVector, IndexSet};

type CMatrix = DMatrix<Complex64>;

/// Singular values below `RANK_RTOL · σ_max` count as zero.
pub const RANK_RTOL: f64 = 1e-10;

fn empty(rows: usize) -> CMatrix {
    CMatrix::zeros(rows, 0)
}

/// Orthonormal basis of the column space of `m`.
pub fn orthonormal_columns(m: &CMatrix) -> CMatrix {
    column_space(m, 0.0)
}

/// Column space with singular values compared against
/// `RANK_RTOL · max(σ_max, reference)`.
fn column_space(m: &CMatrix, reference: f64) -> CMatrix {
    if m.ncols() == 0 || m.nrows() == 0 || m.camax() == 0.0 {
        return empty(m.nrows());
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.max().max(reference);
    let cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > RANK_RTOL * smax)
        .collect();
    CMatrix::from_fn(m.nrows(), cols.len(), |r, c| u[(r, cols[c])])
}

/// Orthonormal basis of `{v : m·v = 0}`.
pub fn null_space(m: &CMatrix) -> CMatrix {
    kernel(m, 0.0)
}

fn kernel(m: &CMatrix, reference: f64) -> CMatrix {
    let n = m.ncols();
    if n == 0 {
        return empty(0);
    }
    if m.nrows() == 0 || m.camax() == 0.0 {
        return CMatrix::identity(n, n);
    }
    // Pad to at least n rows so the SVD returns a full right factor.
    let rows = m.nrows().max(n);
    let padded = CMatrix::from_fn(rows, n, |r, c| {
        if r < m.nrows() {
            m[(r, c)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let smax = svd.singular_values.max().max(reference);
    let rows: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] <= RANK_RTOL * smax)
        .collect();
    CMatrix::from_fn(n, rows.len(), |r, c| v_t[(rows[c], r)].conj())
}

/// `‖P_A − P_B‖₂` for orthonormal bases `a`, `b`: the sine of the largest
/// principal angle, or 1 when the dimensions differ.
pub fn subspace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let pa = a * a.adjoint();
    let pb = b * b.adjoint();
    let d = pa - pb;
    if d.nrows() == 0 || d.camax() == 0.0 {
        return 0.0;
    }
    d.svd(false, false).singular_values.max()
}

/// `max_i σ_i / min_i σ_i`.
pub fn condition_number(m: &CMatrix) -> f64 {
    let s = m.clone().svd(false, false).singular_values;
    s.max() / s.min()
}

/// A complete sesquilinear pairing `⟨y, x⟩ = yᵀ·M·conj(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPairing {
    matrix: CMatrix,
}

impl DualPairing {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "pairing matrix must be square, got {}x{}",
                n,
                matrix.ncols()
            )));
        }
        ensure_invertible(&matrix, "pairing matrix")?;
        Ok(Self { matrix })
    }

    /// The pivot inner product `Σ yᵢ·conj(xᵢ)` on `ℂⁿ`.
    pub fn canonical(n: usize) -> Self {
        Self {
            matrix: CMatrix::identity(n, n),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn pairing(&self, y: &DVector<Complex64>, x: &DVector<Complex64>) -> Complex64 {
        (y.transpose() * &self.matrix * x.conjugate())[(0, 0)]
    }

    /// The same pairing read the other way round, `⟨x, y⟩' = conj⟨y, x⟩`.
    pub fn transpose(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `M·conj(x)`, the coefficients of the linear functional `y ↦ ⟨y, x⟩`.
    fn condition_row(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        &self.matrix * x.conjugate()
    }
}

fn ensure_invertible(m: &CMatrix, what: &str) -> Result<()> {
    if m.nrows() == 0 {
        return Ok(());
    }
    let s = m.clone().svd(false, false).singular_values;
    let (lo, hi) = (s.min(), s.max());
    if lo.is_nan() || lo <= 1e-14 * hi || hi == 0.0 {
        return Err(Error::NotInvertible(format!(
            "{what}: singular values range over [{lo:e}, {hi:e}]"
        )));
    }
    Ok(())
}

/// A subspace of `ℂ^{n₁} × ℂ^{n₂}`, stored as stacked `(x; y)` orthonormal
/// columns.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRelation {
    dims: (usize, usize),
    basis: CMatrix,
}

/// Orthonormal bases of `ker`, `ran`, `mul` and `dom`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationParts {
    pub ker: CMatrix,
    pub ran: CMatrix,
    pub mul: CMatrix,
    pub dom: CMatrix,
}

impl LinearRelation {
    /// Spans the columns of `columns`; dependent columns are allowed.
    pub fn new(dims: (usize, usize), columns: &CMatrix) -> Result<Self> {
        if columns.nrows() != dims.0 + dims.1 {
            return Err(Error::DimensionMismatch(format!(
                "relation columns have {} rows, expected {}",
                columns.nrows(),
                dims.0 + dims.1
            )));
        }
        Ok(Self {
            dims,
            basis: orthonormal_columns(columns),
        })
    }

    /// `{(x, T x)}` for an `n₂ × n₁` matrix.
    pub fn graph(t: &CMatrix) -> Self {
        let (n2, n1) = t.shape();
        let stacked = CMatrix::from_fn(n1 + n2, n1, |r, c| {
            if r < n1 {
                if r == c {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            } else {
                t[(r - n1, c)]
            }
        });
        Self {
            dims: (n1, n2),
            basis: orthonormal_columns(&stacked),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    fn top(&self) -> CMatrix {
        self.basis.rows(0, self.dims.0).into_owned()
    }

    fn bottom(&self) -> CMatrix {
        self.basis.rows(self.dims.0, self.dims.1).into_owned()
    }

    pub fn contains(&self, x: &DVector<Complex64>, y: &DVector<Complex64>, tol: f64) -> bool {
        let v =
            DVector::from_iterator(self.dims.0 + self.dims.1, x.iter().chain(y.iter()).copied());
        let proj = &self.basis * (self.basis.adjoint() * &v);
        (v.clone() - proj).norm() <= tol * v.norm().max(1.0)
    }

    /// Blocks of an orthonormal basis have unit scale, so ranks are judged
    /// against 1 rather than against the block's own largest singular value.
    pub fn parts(&self) -> RelationParts {
        let (top, bottom) = (self.top(), self.bottom());
        RelationParts {
            ker: column_space(&(&top * kernel(&bottom, 1.0)), 1.0),
            ran: column_space(&bottom, 1.0),
            mul: column_space(&(&bottom * kernel(&top, 1.0)), 1.0),
            dom: column_space(&top, 1.0),
        }
    }

    /// The operator matrix when the relation is the graph of one
    /// (`dom = ℂ^{n₁}`, `mul = {0}`).
    pub fn as_operator(&self) -> Result<CMatrix> {
        let top = self.top();
        if self.dim() != self.dims.0 {
            return Err(Error::NotInvertible(format!(
                "relation of dimension {} is not the graph of an operator on C^{}",
                self.dim(),
                self.dims.0
            )));
        }
        let inv = top
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NotInvertible("domain block is singular".into()))?;
        Ok(self.bottom() * inv)
    }

    /// `A* = {(y₂, y₁) : ⟨y₂, x₂⟩₂ = ⟨y₁, x₁⟩₁ for all (x₁, x₂) ∈ A}`, a
    /// relation in `Y₂ × Y₁`.
    pub fn adjoint(&self, pair1: &DualPairing, pair2: &DualPairing) -> Result<LinearRelation> {
        let (n1, n2) = self.dims;
        if pair1.dim() != n1 {
            return Err(Error::mismatch(
                &IndexSet::Finite(pair1.dim()),
                &IndexSet::Finite(n1),
            ));
        }
        if pair2.dim() != n2 {
            return Err(Error::mismatch(
                &IndexSet::Finite(pair2.dim()),
                &IndexSet::Finite(n2),
            ));
        }
        let k = self.dim();
        let mut conditions = CMatrix::zeros(k, n2 + n1);
        for c in 0..k {
            let col = self.basis.column(c);
            let x1 = DVector::from_iterator(n1, col.iter().take(n1).copied());
            let x2 = DVector::from_iterator(n2, col.iter().skip(n1).copied());
            let r2 = pair2.condition_row(&x2);
            let r1 = pair1.condition_row(&x1);
            for j in 0..n2 {
                conditions[(c, j)] = r2[j];
            }
            for j in 0..n1 {
                conditions[(c, n2 + j)] = -r1[j];
            }
        }
        Ok(LinearRelation {
            dims: (n2, n1),
            basis: null_space(&conditions),
        })
    }

    pub fn distance(&self, other: &LinearRelation) -> f64 {
        if self.dims != other.dims {
            return 1.0;
        }
        subspace_distance(&self.basis, &other.basis)
    }
}

/// `S^⊥ = {y : ⟨y, x⟩ = 0 for all x ∈ S}` for an orthonormal basis of `S`.
pub fn annihilator(subspace: &CMatrix, pairing: &DualPairing) -> CMatrix {
    let k = subspace.ncols();
    let n = pairing.dim();
    let mut rows = CMatrix::zeros(k, n);
    for c in 0..k {
        let x = DVector::from_iterator(n, subspace.column(c).iter().copied());
        let r = pairing.condition_row(&x);
        for j in 0..n {
            rows[(c, j)] = r[j];
        }
    }
    null_space(&rows)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationJson {
    dims: [usize; 2],
    basis_columns: Vec<Vec<[f64; 2]>>,
}

impl Serialize for LinearRelation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RelationJson {
            dims: [self.dims.0, self.dims.1],
            basis_columns: self
                .basis
                .column_iter()
                .map(|c| c.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearRelation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = RelationJson::deserialize(deserializer)?;
        let rows = json.dims[0] + json.dims[1];
        if json.basis_columns.iter().any(|c| c.len() != rows) {
            return Err(serde::de::Error::custom(format!(
                "basis columns must have {rows} entries"
            )));
        }
        let m = CMatrix::from_fn(rows, json.basis_columns.len(), |r, c| {
            let [re, im] = json.basis_columns[c][r];
            Complex64::new(re, im)
        });
        LinearRelation::new((json.dims[0], json.dims[1]), &m).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChangeOfPairingReport {
    /// `max |A^{*Z} − ψ₁·A^{*Y}·ψ₂⁻¹|`, relative to `max(1, max |ψ₁A^{*Y}ψ₂⁻¹|)`.
    pub residual: f64,
    /// Same comparison against the closed form `ψ₁·Aᴴ·ψ₂⁻¹`.
    pub closed_form_residual: f64,
    pub kappa_psi1: f64,
    pub kappa_psi2: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip)]
    pub lhs: CMatrix,
    #[serde(skip)]
    pub rhs: CMatrix,
}

/// Compares the adjoint of `A` under the pairings induced by isomorphisms
/// `ψᵢ : Yᵢ → Zᵢ` (so that `⟨ψy, x⟩_Z = ⟨y, x⟩_Y`) with the transported
/// canonical adjoint `ψ₁·A^{*Y}·ψ₂⁻¹`.
pub fn change_of_pairing_check(
    a: &CMatrix,
    psi1: &CMatrix,
    psi2: &CMatrix,
    algebraic_tol: f64,
) -> Result<ChangeOfPairingReport> {
    let (n2, n1) = a.shape();
    if psi1.shape() != (n1, n1) || psi2.shape() != (n2, n2) {
        return Err(Error::DimensionMismatch(format!(
            "A is {n2}x{n1} but psi1 is {:?} and psi2 is {:?}",
            psi1.shape(),
            psi2.shape()
        )));
    }
    ensure_invertible(psi1, "psi1")?;
    ensure_invertible(psi2, "psi2")?;
    let inv = |m: &CMatrix, what: &str| {
        m.clone()
            .try_inverse()
            .ok_or_else(|| Error::NotInvertible(what.to_string()))
    };
    let psi1_inv = inv(psi1, "psi1")?;
    let psi2_inv = inv(psi2, "psi2")?;
    // ⟨ψy, x⟩_Z = yᵀ·ψᵀ·M_Z·conj(x) = yᵀ·conj(x) forces M_Z = ψ^{-T}.
    let z1 = DualPairing::new(psi1_inv.transpose())?;
    let z2 = DualPairing::new(psi2_inv.transpose())?;
    let graph = LinearRelation::graph(a);
    let lhs = graph.adjoint(&z1, &z2)?.as_operator()?;
    let adj_y = graph
        .adjoint(&DualPairing::canonical(n1), &DualPairing::canonical(n2))?
        .as_operator()?;
    let rhs = psi1 * adj_y * &psi2_inv;
    let closed = psi1 * a.adjoint() * &psi2_inv;
    let scale = rhs.camax().max(1.0);
    let residual = (&lhs - &rhs).camax() / scale;
    let closed_form_residual = (&lhs - &closed).camax() / closed.camax().max(1.0);
    let kappa_psi1 = condition_number(psi1);
    let kappa_psi2 = condition_number(psi2);
    let tolerance = algebraic_tol * kappa_psi1 * kappa_psi2;
    Ok(ChangeOfPairingReport {
        residual,
        closed_form_residual,
        kappa_psi1,
        kappa_psi2,
        tolerance,
        passed: residual <= tolerance && closed_form_residual <= tolerance,
        lhs,
        rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VonNeumannReport {
    /// Relative Hermitian residual of `T*T` and `TT*`.
    pub hermitian_residual: f64,
    pub min_eig_domain: f64,
    pub min_eig_range: f64,
    /// `‖(I + T*T)x − h‖ / ‖h‖` for the solved system.
    pub solve_residual: f64,
    /// `dom T*T` is a core of `T`; automatic in finite dimension.
    pub core_property: bool,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip)]
    pub t_star_t: CMatrix,
    #[serde(skip)]
    pub t_t_star: CMatrix,
}

fn hermitian_residual(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let scale = m.camax().max(1.0);
    (m - m.adjoint()).camax() / scale
}

/// Smallest eigenvalues of `I + T*T` (size `cols`) and `I + TT*` (size
/// `rows`), read off the singular values of `T` as `1 + σ²`. A dimension
/// beyond the rank contributes the eigenvalue 1.
fn min_eigenvalues(t: &CMatrix) -> (f64, f64) {
    let (rows, cols) = t.shape();
    let sigma_min = if rows == 0 || cols == 0 {
        0.0
    } else {
        t.singular_values().min()
    };
    let lowest = |dim: usize| match dim {
        0 => f64::INFINITY,
        d if d > rows.min(cols) => 1.0,
        _ => 1.0 + sigma_min * sigma_min,
    };
    (lowest(cols), lowest(rows))
}

/// Checks that `I + T*T` and `I + TT*` are Hermitian with spectrum in
/// `[1, ∞)`, hence boundedly invertible, and solves one system with them.
pub fn von_neumann_check(t: &CMatrix, algebraic_tol: f64) -> Result<VonNeumannReport> {
    let m = t.ncols();
    let t_star_t = t.adjoint() * t;
    let t_t_star = t * t.adjoint();
    let hermitian_residual = hermitian_residual(&t_star_t).max(hermitian_residual(&t_t_star));
    let dom = CMatrix::identity(m, m) + hermitize(&t_star_t, m);
    let (min_eig_domain, min_eig_range) = min_eigenvalues(t);
    let h = DVector::from_fn(m, |k, _| {
        Complex64::new(1.0 / (k as f64 + 1.0), if k % 2 == 0 { 1.0 } else { -1.0 })
    });
    let solve_residual = if m == 0 {
        0.0
    } else {
        let chol = dom
            .clone()
            .cholesky()
            .ok_or_else(|| Error::NotInvertible("I + T*T is not positive definite".into()))?;
        let x = chol.solve(&h);
        (&dom * x - &h).norm() / h.norm()
    };
    let scale = 1.0 + t_star_t.camax();
    let tolerance = algebraic_tol;
    let passed = hermitian_residual <= tolerance
        && min_eig_domain >= 1.0 - tolerance
        && min_eig_range >= 1.0 - tolerance
        && solve_residual <= tolerance * scale;
    Ok(VonNeumannReport {
        hermitian_residual,
        min_eig_domain,
        min_eig_range,
        solve_residual,
        core_property: true,
        tolerance,
        passed,
        t_star_t,
        t_t_star,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CesaroSelection {
    /// Zero-based positions `n(1) < n(2) < …` in the input sequence.
    pub indices: Vec<usize>,
    /// `‖(1/N) Σₖ x_{n(k)}‖₀`.
    pub cesaro_norm: f64,
    /// `C = max_k ‖x_{n(k)}‖₀`.
    pub max_norm: f64,
    /// `(C²/N + ln(N)/N)^{1/2}`.
    pub bound: f64,
}

impl CesaroSelection {
    pub fn within_bound(&self) -> bool {
        self.cesaro_norm <= self.bound
    }
}

/// Greedy subsequence with `|⟨x_{n(k)}, x_{n(j)}⟩₀| ≤ 1/k` for all `j < k`:
/// `n(1)` is the first index and each later pick is the first admissible
/// index after the previous one.
pub fn cesaro_select(vectors: &[CoeffVector], n: usize) -> Result<CesaroSelection> {
    if n == 0 {
        return Err(Error::DimensionMismatch(
            "cesaro_select needs N >= 1".into(),
        ));
    }
    if vectors.is_empty() {
        return Err(Error::SelectionExhausted {
            partial: Vec::new(),
            requested: n,
        });
    }
    let mut picked = vec![0usize];
    let mut next = 1;
    while picked.len() < n {
        let k = picked.len() + 1;
        let bound = 1.0 / k as f64;
        let found = (next..vectors.len()).find(|&i| {
            picked.iter().all(|&j| {
                pivot_inner(&vectors[i], &vectors[j])
                    .map(|z| z.norm() <= bound)
                    .unwrap_or(false)
            })
        });
        match found {
            Some(i) => {
                picked.push(i);
                next = i + 1;
            }
            None => {
                return Err(Error::SelectionExhausted {
                    partial: picked,
                    requested: n,
                })
            }
        }
    }
    let mut sum = CoeffVector::zero(vectors[0].index_set());
    for &i in &picked {
        sum = sum.add(&vectors[i])?;
    }
    let nf = n as f64;
    let cesaro_norm = crate::vector::pivot_norm(&sum) / nf;
    let max_norm = picked
        .iter()
        .map(|&i| crate::vector::pivot_norm(&vectors[i]))
        .fold(0.0, f64::max);
    let bound = ((max_norm * max_norm) / nf + nf.ln() / nf).sqrt();
    Ok(CesaroSelection {
        indices: picked,
        cesaro_norm,
        max_norm,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn real(rows: usize, cols: usize, v: &[f64]) -> CMatrix {
        CMatrix::from_row_slice(rows, cols, &v.iter().map(|&x| c(x)).collect::<Vec<_>>())
    }

    fn e(n: usize, k: usize) -> CMatrix {
        CMatrix::from_fn(n, 1, |r, _| if r == k { c(1.0) } else { c(0.0) })
    }

    #[test]
    fn parts_of_identity_graph() {
        let p = LinearRelation::graph(&CMatrix::identity(2, 2)).parts();
        assert_eq!(p.ker.ncols(), 0);
        assert_eq!(p.mul.ncols(), 0);
        assert_eq!(p.dom.ncols(), 2);
        assert_eq!(p.ran.ncols(), 2);
    }

    #[test]
    fn parts_of_nilpotent_graph() {
        let p = LinearRelation::graph(&real(2, 2, &[0.0, 1.0, 0.0, 0.0])).parts();
        assert!(subspace_distance(&p.ker, &e(2, 0)) < 1e-14);
        assert!(subspace_distance(&p.ran, &e(2, 0)) < 1e-14);
        assert_eq!(p.mul.ncols(), 0);
        assert_eq!(p.dom.ncols(), 2);
    }

    #[test]
    fn purely_multivalued_relation() {
        let r = LinearRelation::new((1, 1), &real(2, 1, &[0.0, 1.0])).unwrap();
        let p = r.parts();
        assert_eq!(p.mul.ncols(), 1);
        assert_eq!(p.dom.ncols(), 0);
        let adj = r
            .adjoint(&DualPairing::canonical(1), &DualPairing::canonical(1))
            .unwrap();
        let pa = adj.parts();
        // mul A* = (dom A)^⊥ = Y₁, ker A* = (ran A)^⊥ = {0}.
        assert_eq!(pa.mul.ncols(), 1);
        assert_eq!(pa.ker.ncols(), 0);
    }

    #[test]
    fn adjoint_is_conjugate_transpose() {
        let id = LinearRelation::graph(&CMatrix::identity(2, 2));
        let can = DualPairing::canonical(2);
        assert!(id.adjoint(&can, &can).unwrap().distance(&id) < 1e-14);
        let mut a = real(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        a[(0, 1)] = Complex64::new(2.0, 1.0);
        let adj = LinearRelation::graph(&a).adjoint(&can, &can).unwrap();
        let m = adj.as_operator().unwrap();
        assert!((m - a.adjoint()).camax() < 1e-14);
    }

    #[test]
    fn change_of_pairing_examples() {
        let a = real(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let id = CMatrix::identity(2, 2);
        let r = change_of_pairing_check(&a, &id, &id, 1e-12).unwrap();
        assert!(r.residual < 1e-15 && r.passed);
        let psi1 = real(2, 2, &[2.0, 0.0, 0.0, 0.5]);
        let r = change_of_pairing_check(&a, &psi1, &id, 1e-12).unwrap();
        assert!(r.passed);
        assert!((&r.lhs - &psi1 * a.adjoint()).camax() < 1e-14);
        let singular = real(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            change_of_pairing_check(&a, &singular, &id, 1e-12),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn von_neumann_examples() {
        let r = von_neumann_check(&CMatrix::zeros(2, 2), 1e-12).unwrap();
        assert_eq!(r.min_eig_domain, 1.0);
        assert!(r.passed && r.core_property);
        let r = von_neumann_check(&real(2, 2, &[0.0, 1.0, 0.0, 0.0]), 1e-12).unwrap();
        assert_eq!(r.t_star_t, real(2, 2, &[0.0, 0.0, 0.0, 1.0]));
        assert!((r.min_eig_domain - 1.0).abs() < 1e-15);
        assert!(r.passed);
    }

    #[test]
    fn cesaro_examples() {
        let set = IndexSet::Finite(100);
        let basis: Vec<CoeffVector> = (1..=100)
            .map(|i| CoeffVector::basis(set, i).unwrap())
            .collect();
        let s = cesaro_select(&basis, 100).unwrap();
        assert_eq!(s.indices, (0..100).collect::<Vec<_>>());
        assert_eq!(s.cesaro_norm, 0.1);
        assert!(s.within_bound());
        let s = cesaro_select(&basis[..16], 16).unwrap();
        assert_eq!(s.cesaro_norm, 0.25);
        assert!(s.cesaro_norm <= (1.0 / 16.0 + 16f64.ln() / 16.0).sqrt());
        let constant = vec![basis[0].clone(); 5];
        match cesaro_select(&constant, 2) {
            Err(Error::SelectionExhausted { partial, requested }) => {
                assert_eq!(partial, vec![0]);
                assert_eq!(requested, 2);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn relation_json_roundtrip() {
        let r = LinearRelation::graph(&real(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.starts_with(r#"{"dims":[2,2],"basis_columns":"#));
        let back: LinearRelation = serde_json::from_str(&text).unwrap();
        assert!(back.distance(&r) < 1e-14);
    }
}
