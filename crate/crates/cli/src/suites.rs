//! Verification suites and their replayable checks.

use std::time::Instant;

use gelfand_core::catalog::{cauchy_demo, lp_discrete_triple, paper_ell2_triple, HOLDER_SLACK};
use gelfand_core::decomp::{decompose, verify_decomposition};
use gelfand_core::relations::{
    cesaro_select, change_of_pairing_check, orthonormal_columns, von_neumann_check,
};
use gelfand_core::sampling::{derive_seed, random_matrix, random_vector, rng};
use gelfand_core::triple::{exact_sum_feasible, plus_form, quantum, recover_gram, Direction};
use gelfand_core::zspace::{
    canonical_split, intersection_witness, optimal_split, split_objective, z_minus_norm,
    ZMinusElement,
};
use gelfand_core::{pivot_inner, pivot_norm, CoeffVector, IndexSet, QuasiTriple, Scalar};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Suite;

/// Random functionals probed per instance by the minus-norm oracle suite.
pub const ORACLE_VECTORS: usize = 20;
/// Cap on the number of random matrix problems in the relations suite.
pub const RELATION_TRIALS: usize = 100;
/// Orthonormal vectors fed to the Cesàro selection.
pub const CESARO_COUNT: usize = 100;
/// Exponents and grid sizes exercised by the Hölder checks.
pub const HOLDER_EXPONENTS: [f64; 3] = [4.0 / 3.0, 2.0, 3.0];
pub const HOLDER_GRIDS: [usize; 2] = [8, 64];
/// Cuts verified by the decomposition suite.
pub const DECOMPOSITION_CUTS: [&str; 2] = ["0:1", "0:2"];
/// Largest symmetric index for the Cauchy cross-check.
const CAUCHY_WINDOW: u64 = 200;

/// Dense complex matrix in row-major `[re, im]` form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixJson(pub Vec<Vec<[f64; 2]>>);

impl From<&DMatrix<Complex64>> for MatrixJson {
    fn from(m: &DMatrix<Complex64>) -> Self {
        MatrixJson(
            m.row_iter()
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        )
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>, gelfand_core::Error> {
        let rows = self.0.len();
        let cols = self.0.first().map_or(0, Vec::len);
        if self.0.iter().any(|r| r.len() != cols) {
            return Err(gelfand_core::Error::DimensionMismatch(
                "ragged matrix rows".into(),
            ));
        }
        Ok(DMatrix::from_fn(rows, cols, |r, c| {
            Complex64::new(self.0[r][c][0], self.0[r][c][1])
        }))
    }
}

/// Everything a check needs to recompute its residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Inputs {
    None,
    Vector {
        x: CoeffVector,
    },
    Pair {
        f: CoeffVector,
        g: CoeffVector,
    },
    Probe {
        f: CoeffVector,
        g: CoeffVector,
        z: CoeffVector,
    },
    Oracle {
        g: CoeffVector,
        trials: usize,
        seed: u64,
    },
    Cut {
        cut: String,
        samples: usize,
        seed: u64,
        worst: Option<CoeffVector>,
    },
    Matrices {
        a: MatrixJson,
        psi1: MatrixJson,
        psi2: MatrixJson,
    },
    Matrix {
        t: MatrixJson,
    },
    Rotation {
        dim: usize,
        seed: u64,
    },
    Range {
        m: u64,
        n: u64,
    },
    Grid {
        p: f64,
        f: Vec<[f64; 2]>,
        g: Vec<[f64; 2]>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Pairing,
    MinusNormBound,
    MinusNormMaximizer,
    GramRecover,
    TripleJson,
    MinusIsInversePlus,
    PivotSplitExact,
    OptimalSplitValue,
    OptimalSplitProbe,
    CanonicalPythagoras,
    Intersection,
    Decomposition,
    ChangeOfPairing,
    VonNeumann,
    CesaroOrthonormal,
    CesaroWeak,
    CauchyDemo,
    CauchyTriple,
    Ell2Norms,
    Holder,
    HolderEquality,
}

/// One evaluated check; `residual ≤ tolerance` means it passed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub residual: f64,
    pub tolerance: f64,
}

impl Outcome {
    fn new(residual: f64, tolerance: f64) -> Self {
        Self {
            residual,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }

    /// Ordering key: failures first, then the residual in units of the
    /// tolerance (or the bare residual for exact checks).
    fn severity(&self) -> (bool, f64) {
        let scaled = if self.tolerance > 0.0 {
            self.residual / self.tolerance
        } else {
            self.residual
        };
        (!self.passed(), scaled)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub suite: Suite,
    pub check: Check,
    pub seed: u64,
    pub residual: f64,
    pub tolerance: f64,
    pub inputs: Inputs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: Suite,
    pub status: Status,
    pub max_residual: f64,
    /// Tolerance of the check closest to (or furthest past) its threshold.
    pub tolerance_used: f64,
    pub checks: usize,
    pub seed: u64,
    pub runtime_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Counterexample>,
}

type CheckResult = Result<Outcome, gelfand_core::Error>;

/// Accumulates outcomes and keeps the most severe one.
struct Tracker {
    suite: Suite,
    seed: u64,
    checks: usize,
    max_residual: f64,
    worst: Option<((bool, f64), Outcome)>,
    failure: Option<Counterexample>,
    failure_severity: (bool, f64),
}

impl Tracker {
    fn new(suite: Suite, seed: u64) -> Self {
        Self {
            suite,
            seed,
            checks: 0,
            max_residual: 0.0,
            worst: None,
            failure: None,
            failure_severity: (false, 0.0),
        }
    }

    fn record(&mut self, check: Check, outcome: Outcome, inputs: impl FnOnce() -> Inputs) {
        self.checks += 1;
        self.max_residual = self.max_residual.max(outcome.residual);
        let severity = outcome.severity();
        if self.worst.as_ref().is_none_or(|w| severity > w.0) {
            self.worst = Some((severity, outcome));
        }
        if !outcome.passed() && (self.failure.is_none() || severity > self.failure_severity) {
            self.failure_severity = severity;
            self.failure = Some(Counterexample {
                suite: self.suite,
                check,
                seed: self.seed,
                residual: outcome.residual,
                tolerance: outcome.tolerance,
                inputs: inputs(),
            });
        }
    }

    fn finish(self, runtime_ms: u64, error: Option<String>) -> SuiteReport {
        let failed = self.failure.is_some() || error.is_some();
        SuiteReport {
            name: self.suite,
            status: if failed { Status::Fail } else { Status::Pass },
            max_residual: self.max_residual,
            tolerance_used: self.worst.map_or(0.0, |w| w.1.tolerance),
            checks: self.checks,
            seed: self.seed,
            runtime_ms,
            error,
            counterexample: self.failure,
        }
    }
}

/// Runs one suite with its sub-seed derived from `master_seed`.
pub fn run_suite(
    suite: Suite,
    triple: &QuasiTriple,
    samples: usize,
    master_seed: u64,
) -> SuiteReport {
    let seed = derive_seed(master_seed, suite.name());
    let start = Instant::now();
    let mut tracker = Tracker::new(suite, seed);
    let mut rng = rng(seed);
    let result = match suite {
        Suite::Pairing => pairing_suite(&mut tracker, triple, samples, &mut rng),
        Suite::MinusNormOracle => oracle_suite(&mut tracker, triple, samples, &mut rng),
        Suite::GramRoundtrip => gram_suite(&mut tracker, triple, samples, &mut rng),
        Suite::PivotSplit => pivot_suite(&mut tracker, triple, samples, &mut rng),
        Suite::Zspace => zspace_suite(&mut tracker, triple, samples, &mut rng),
        Suite::Decomposition => decomposition_suite(&mut tracker, triple, samples, seed),
        Suite::Relations => relations_suite(&mut tracker, triple, samples, &mut rng),
        Suite::Cesaro => cesaro_suite(&mut tracker, triple, samples, &mut rng),
        Suite::CatalogDemos => catalog_suite(&mut tracker, triple, samples, &mut rng),
    };
    let runtime_ms = start.elapsed().as_millis() as u64;
    tracker.finish(runtime_ms, result.err().map(|e| e.to_string()))
}

/// Recomputes the residual of a counterexample.
pub fn replay(triple: &QuasiTriple, cx: &Counterexample) -> CheckResult {
    let bad = || gelfand_core::Error::Parse(format!("inputs do not fit check {:?}", cx.check));
    match (&cx.check, &cx.inputs) {
        (Check::Pairing, Inputs::Pair { f, g }) => check_pairing(triple, g, f),
        (Check::MinusNormBound, Inputs::Oracle { g, trials, seed }) => {
            Ok(check_oracle(triple, g, *trials, *seed)?.0)
        }
        (Check::MinusNormMaximizer, Inputs::Oracle { g, trials, seed }) => {
            Ok(check_oracle(triple, g, *trials, *seed)?.1)
        }
        (Check::GramRecover, Inputs::None) => check_gram_recover(triple),
        (Check::TripleJson, Inputs::None) => check_triple_json(triple),
        (Check::MinusIsInversePlus, Inputs::Vector { x }) => check_minus_inverse(triple, x),
        (Check::PivotSplitExact, Inputs::Vector { x }) => check_pivot_split(triple, x),
        (Check::OptimalSplitValue, Inputs::Pair { f, g }) => check_optimal_value(triple, f, g),
        (Check::OptimalSplitProbe, Inputs::Probe { f, g, z }) => {
            check_optimal_probe(triple, f, g, z)
        }
        (Check::CanonicalPythagoras, Inputs::Vector { x }) => check_canonical(triple, x),
        (Check::Intersection, Inputs::Pair { f, g }) => check_intersection(triple, f, g),
        (
            Check::Decomposition,
            Inputs::Cut {
                cut, samples, seed, ..
            },
        ) => Ok(check_decomposition(triple, cut, *samples, *seed)?.0),
        (Check::ChangeOfPairing, Inputs::Matrices { a, psi1, psi2 }) => check_change_of_pairing(
            triple,
            &a.to_matrix()?,
            &psi1.to_matrix()?,
            &psi2.to_matrix()?,
        ),
        (Check::VonNeumann, Inputs::Matrix { t }) => check_von_neumann(triple, &t.to_matrix()?),
        (Check::CesaroOrthonormal, Inputs::Rotation { dim, seed }) => {
            check_cesaro_orthonormal(triple, *dim, *seed)
        }
        (Check::CesaroWeak, Inputs::Range { m, n }) => check_cesaro_weak(*m as usize, *n as usize),
        (Check::CauchyDemo, Inputs::None) => check_cauchy_demo(triple),
        (Check::CauchyTriple, Inputs::Range { m, n }) => check_cauchy_triple(triple, *m, *n),
        (Check::Ell2Norms, Inputs::None) => check_ell2_norms(triple),
        (Check::Holder, Inputs::Grid { p, f, g }) => check_holder(*p, f, g),
        (Check::HolderEquality, Inputs::Grid { p, f, .. }) => check_holder_equality(*p, f),
        _ => Err(bad()),
    }
}

fn relative(diff: f64, scale: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else {
        diff / scale.max(f64::MIN_POSITIVE)
    }
}

// ---- pairing ----

fn check_pairing(t: &QuasiTriple, g: &CoeffVector, f: &CoeffVector) -> CheckResult {
    let scale = pivot_norm(g) * pivot_norm(f);
    let dual = t.pairing(g, f)?;
    let pivot = (dual - pivot_inner(g, f)?).norm();
    let psi = (dual - t.plus_inner(&t.duality_map_psi(g, Direction::Forward)?, f)?).norm();
    Ok(Outcome::new(relative(pivot.max(psi), scale), t.tol()))
}

fn pairing_suite(
    tr: &mut Tracker,
    t: &QuasiTriple,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(), gelfand_core::Error> {
    let set = t.index_set();
    for _ in 0..samples {
        let g = random_vector(rng, set);
        let f = random_vector(rng, set);
        let out = check_pairing(t, &g, &f)?;
        tr.record(Check::Pairing, out, || Inputs::Pair { f, g });
    }
    Ok(())
}

// ---- minus-norm oracle ----

/// `(bound, maximizer)` outcomes for one functional.
fn check_oracle(
    t: &QuasiTriple,
    g: &CoeffVector,
    trials: usize,
    seed: u64,
) -> Result<(Outcome, Outcome), gelfand_core::Error> {
    let o = t.minus_norm_oracle(g, trials, seed)?;
    let excess = relative((o.value - o.closed_form).max(0.0), o.closed_form);
    let gap = relative((o.at_maximizer - o.closed_form).abs(), o.closed_form);
    Ok((
        Outcome::new(excess, t.tol()),
        Outcome::new(gap, t.oracle_tol()),
    ))
}

fn oracle_suite(
    tr: &mut Tracker,
    t: &QuasiTriple,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(), gelfand_core::Error> {
    for _ in 0..ORACLE_VECTORS {
        let g = random_vector(rng, t.index_set());
        let seed: u64 = rng.random();
        let (bound, at_max) = check_oracle(t, &g, samples, seed)?;
        let inputs = || Inputs::Oracle {
            g: g.clone(),
            trials: samples,
            seed,
        };
        tr.record(Check::MinusNormBound, bound, inputs);
        tr.record(Check::MinusNormMaximizer, at_max, inputs);
    }
    Ok(())
}

// ---- gram roundtrip ----

fn check_gram_recover(t: &QuasiTriple) -> CheckResult {
    let gram = t.gram();
    let residual = match (t.index_set(), gram.matrix()) {
        (IndexSet::Finite(n), Some(expected)) => {
            let recovered = recover_gram(plus_form(t), n, t.tolerance().algebraic_tol)?
                .matrix()
                .expect("finite recovery is dense");
            relative((recovered - &expected).camax(), expected.camax())
        }
        _ => {
            // Infinite index set: compare the plus-form with the weight on a window.
            let form = plus_form(t);
            let window = gelfand_core::sampling::SYMMETRIC_WINDOW;
            let indices: Vec<i64> = (1..=window).flat_map(|k| [k, -k]).collect();
            let mut worst = 0.0_f64;
            for &i in &indices {
                for &j in &indices {
                    let value = form(i, j);
                    let expected = if i == j {
                        gram.diagonal_entry(i).unwrap_or(f64::NAN)
                    } else {
                        0.0
                    };
                    let scale = gram
                        .diagonal_entry(i)
                        .unwrap_or(1.0)
                        .max(gram.diagonal_entry(j).unwrap_or(1.0));
                    worst = worst.max(relative(
                        (value - Complex64::new(expected, 0.0)).norm(),
                        scale,
                    ));
                }
            }
            worst
        }
    };
    Ok(Outcome::new(residual, t.tol()))
}

fn check_triple_json(t: &QuasiTriple) -> CheckResult {
    let back = QuasiTriple::from_json(&t.to_json())?;
    Ok(Outcome::new(if &back == t { 0.0 } else { 1.0 }, 0.0))
}

fn check_minus_inverse(t: &QuasiTriple, x: &CoeffVector) -> CheckResult {
    let minus = t.minus_norm(x)?;
    let inverse_plus = t.inverse().plus_norm(x)?;
    Ok(Outcome::new(
        relative((minus - inverse_plus).abs(), minus),
        t.tol(),
    ))
}

fn gram_suite(
    tr: &mut Tracker,
    t: &QuasiTriple,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(), gelfand_core::Error> {
    tr.record(Check::GramRecover, check_gram_recover(t)?, || Inputs::None);
    tr.record(Check::TripleJson, check_triple_json(t)?, || Inputs::None);
    for _ in 0..samples {
        let x = random_vector(rng, t.index_set());
        let out = check_minus_inverse(t, &x)?;
        tr.record(Check::MinusIsInversePlus, out, || Inputs::Vector { x });
    }
    Ok(())
}

// ---- pivot split ----

/// Worst excess of `fl(fᵢ + gᵢ)` over `xᵢ`, relative to `max |xᵢ|`. Each real
/// component must be exact where [`exact_sum_feasible`] allows and within
/// half a spacing of the larger part elsewhere.
fn sum_defect(x: &CoeffVector, f: &CoeffVector, g: &CoeffVector) -> f64 {
    let component = |x: f64, a: f64, b: f64| -> f64 {
        let s = a + b;
        if s == x {
            0.0
        } else if exact_sum_feasible(x, a, b) {
            (s - x).abs().max(f64::MIN_POSITIVE)
        } else {
            ((s - x).abs() - quantum(a.abs().max(b.abs())) / 2.0).max(0.0)
        }
    };
    let worst = x
        .support()
        .chain(f.support())
        .chain(g.support())
        .map(|i| {
            let (xi, fi, gi) = (x.get(i), f.get(i), g.get(i));
            component(xi.re, fi.re, gi.re).max(component(xi.im, fi.im, gi.im))
        })
        .fold(0.0, f64::max);
    relative(worst, x.max_abs())
}

fn check_pivot_split(t: &QuasiTriple, x: &CoeffVector) -> CheckResult {
    let split = t.pivot_split(x)?;
    Ok(Outcome::new(sum_defect(x, &split.plus, &split.minus), 0.0))
}

fn pivot_suite(
    tr: &mut Tracker,
    t: &QuasiTriple,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(), gelfand_core::Error> {
    for _ in 0..samples {
        let x = random_vector(rng, t.index_set());
        let out = check_pivot_split(t, &x)?;
        tr.record(Check::PivotSplitExact, out, || Inputs::Vector { x });
    }
    Ok(())
}

// ---- z-spaces ----

fn check_optimal_value(t: &QuasiTriple, f: &CoeffVector, g: &CoeffVector) -> CheckResult {
    let value = optimal_split(t, f, g)?.value;
    let closed = z_minus_norm(t, &ZMinusElement::new(f.clone(), g.clone())?)?;
    Ok(Outcome::new(
        relative((value - closed).abs(), closed),
        t.oracle_tol(),
    ))
}

fn check_optimal_probe(
    t: &QuasiTriple,
    f: &CoeffVector,
    g: &CoeffVector,
    z: &CoeffVector,
) -> CheckResult {
    let best = optimal_split(t, f, g)?.value.powi(2);
    let probe = split_objective(t, f, g, z)?;
    Ok(Outcome::new(
        relative((best - probe).max(0.0), best),
        t.tol(),
    ))
}

fn check_canonical(t: &QuasiTriple, h: &CoeffVector) -> CheckResult {
    let split = canonical_split(t, h)?;
    let parts = t.plus_norm(&split.plus_part)?.powi(2) + t.minus_norm(&split.minus_part)?.powi(2);
    let norm = z_minus_norm(t, &ZMinusElement::from_plus(h.clone()))?.powi(2);
    let pythagoras = Outcome::new(relative((parts - norm).abs(), norm), t.tol());
    let defect = sum_defect(h, &split.plus_part, &split.minus_part);
    Ok(if defect > 0.0 {
        Outcome::new(defect, 0.0)
    } else {
        pythagoras
    })
}

/// 1 for a misclassified pair, 0 otherwise.
fn check_intersection(t: &QuasiTriple, f: &CoeffVector, g: &CoeffVector) -> CheckResult {
    let expected = f.index_set() == g.index_set()
        && f.support().chain(g.support()).all(|i| f.get(i) == g.get(i));
    let verdict = intersection_witness(t, f, g)?;
    Ok(Outcome::new(
        if verdict.equal == expected { 0.0 } else { 1.0 },
        0.0,
    ))
}

fn perturb_one(rng: &mut ChaCha8Rng, f: &CoeffVector) -> CoeffVector {
    let support: Vec<i64> = f.support().collect();
    let target = support[rng.random_range(0..support.len())];
    let size = 10f64.powf(rng.random_range(-15.0..0.0));
    let entries = f.iter().map(|(i, v)| {
        let w = if i == target {
            v + Complex64::new(size * v.norm(), 0.0)
        } else {
            v
        };
        (i, w)
    });
    CoeffVector::from_entries(f.index_set(), entries).expect("same index set")
}

fn zspace_suite(
    tr: &mut Tracker,
    t: &QuasiTriple,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(), gelfand_core::Error> {
    let set = t.index_set();
    for k in 0..samples {
        let f = random_vector(rng, set);
        let g = random_vector(rng, set);
        let out = check_optimal_value(t, &f, &g)?;
        tr.record(Check::OptimalSplitValue, out, || Inputs::Pair {
            f: f.clone(),
            g: g.clone(),
        });

        let opt = optimal_split(t, &f, &g)?;
        let z = if k % 2 == 0 {
            random_vector(rng, set)
        } else {
            let eps = 10f64.powf(rng.random_range(-6.0..-1.0));
            opt.shift
                .add(&random_vector(rng, set).scale(Scalar::new(eps, 0.0)))?
        };
        let out = check_optimal_probe(t, &f, &g, &z)?;
        tr.record(Check::OptimalSplitProbe, out, || Inputs::Probe {
            f: f.clone(),
            g: g.clone(),
            z,
        });

        let h = f.add(&g)?;
        let out = check_canonical(t, &h)?;
        tr.record(Check::CanonicalPythagoras, out, || Inputs::Vector { x: h });

        let other = if rng.random_bool(0.5) {
            f.clone()
        } else {
            perturb_one(rng, &f)
        };
        let out = check_intersection(t, &f, &other)?;
        tr.record(Check::Intersection, out, || Inputs::Pair {
            f: f.clone(),
            g: other,
        });
    }
    Ok(())
}

// ---- decomposition ----

fn check_decomposition(
    t: &QuasiTriple,
    cut: &str,
    samples: usize,
    seed: u64,
) -> Result<(Outcome, Option<CoeffVector>), gelfand_core::Error> {
    let interval = cut.parse()?;
    let split = decompose(t, &interval)?;
    let report = verify_decomposition(&split, t, samples, seed)?;
    let mut residual = report.residuals.max();
    if cut == "0:1" && !report.constant_one {
        residual = residual.max(1.0);
    }
    Ok((Outcome::new(residual, report.tolerance), report.worst))
}

fn decomposition_suite(
    tr: &mut Tracker,
    t: &QuasiTriple,
    samples: usize,
    seed: u64,
) -> Result<(), gelfand_core::Error> {
    for cut in DECOMPOSITION_CUTS {
        let cut_seed = derive_seed(seed, cut);
        let (out, worst) = check_decomposition(t, cut, samples, cut_seed)?;
        tr.record(Check::Decomposition, out, || Inputs::Cut {
            cut: cut.to_string(),
            samples,
            seed: cut_seed,
            worst,
        });
    }
    Ok(())
}

// ---- relations ----

fn check_change_of_pairing(
    t: &QuasiTriple,
    a: &DMatrix<Complex64>,
    psi1: &DMatrix<Complex64>,
    psi2: &DMatrix<Complex64>,
) -> CheckResult {
    let r = change_of_pairing_check(a, psi1, psi2, t.tolerance().algebraic_tol)?;
    Ok(Outcome::new(
        r.residual.max(r.closed_form_residual),
        r.tolerance,
    ))
}

fn check_von_neumann(t: &QuasiTriple, m: &DMatrix<Complex64>) -> CheckResult {
    let r = von_neumann_check(m, t.tolerance().algebraic_tol)?;
    let scale = 1.0 + r.t_star_t.camax();
    let residual = r
        .hermitian_residual
        .max(1.0 - r.min_eig_domain)
        .max(1.0 - r.min_eig_range)
        .max(r.solve_residual / scale)
        .max(0.0);
    Ok(Outcome::new(residual, r.tolerance))
}

fn relations_suite(
    tr: &mut Tracker,
    t: &QuasiTriple,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(), gelfand_core::Error> {
    for _ in 0..samples.min(RELATION_TRIALS) {
        let (n1, n2) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let a = random_matrix(rng, n2, n1);
        let psi1 = random_matrix(rng, n1, n1);
        let psi2 = random_matrix(rng, n2, n2);
        let out = check_change_of_pairing(t, &a, &psi1, &psi2)?;
        tr.record(Check::ChangeOfPairing, out, || Inputs::Matrices {
            a: (&a).into(),
            psi1: (&psi1).into(),
            psi2: (&psi2).into(),
        });

        let scale = 10f64.powf(rng.random_range(-2.0..2.0));
        let m = random_matrix(rng, n2, n1) * Complex64::new(scale, 0.0);
        let out = check_von_neumann(t, &m)?;
        tr.record(Check::VonNeumann, out, || Inputs::Matrix { t: (&m).into() });
    }
    Ok(())
}

// ---- cesaro ----

/// `dim` orthonormal vectors: the unit basis for seed 0, otherwise the
/// columns of a random unitary.
fn orthonormal_family(dim: usize, seed: u64) -> Vec<CoeffVector> {
    let set = IndexSet::Finite(dim);
    if seed == 0 {
        return (1..=dim as i64)
            .map(|i| CoeffVector::basis(set, i).expect("index in range"))
            .collect();
    }
    let q = orthonormal_columns(&random_matrix(&mut rng(seed), dim, dim));
    q.column_iter()
        .map(|c| CoeffVector::from_dense(set, &c.into_owned()).expect("dimension matches"))
        .collect()
}

fn check_cesaro_orthonormal(t: &QuasiTriple, dim: usize, seed: u64) -> CheckResult {
    let family = orthonormal_family(dim, seed);
    let sel = cesaro_select(&family, dim)?;
    let expected = 1.0 / (dim as f64).sqrt();
    let mut residual = relative((sel.cesaro_norm - expected).abs(), expected);
    if !sel.within_bound() {
        residual = residual.max(1.0);
    }
    let tol = if seed == 0 {
        0.0
    } else {
        t.tolerance().algebraic_tol * dim as f64
    };
    Ok(Outcome::new(residual, tol))
}

/// `x_k = e₁/√k + e_{k+1}`, weakly null but not orthogonal.
fn check_cesaro_weak(len: usize, n: usize) -> CheckResult {
    let set = IndexSet::Finite(len + 1);
    let family: Vec<CoeffVector> = (1..=len)
        .map(|k| {
            CoeffVector::from_real(set, [(1, 1.0 / (k as f64).sqrt()), (k as i64 + 1, 1.0)])
                .expect("indices in range")
        })
        .collect();
    let sel = cesaro_select(&family, n)?;
    Ok(Outcome::new(
        relative((sel.cesaro_norm - sel.bound).max(0.0), sel.bound),
        0.0,
    ))
}

fn cesaro_suite(
    tr: &mut Tracker,
    t: &QuasiTriple,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(), gelfand_core::Error> {
    let trials = samples.clamp(1, 10);
    for k in 0..trials {
        let seed = if k == 0 {
            0
        } else {
            rng.random_range(1..u64::MAX)
        };
        let out = check_cesaro_orthonormal(t, CESARO_COUNT, seed)?;
        tr.record(Check::CesaroOrthonormal, out, || Inputs::Rotation {
            dim: CESARO_COUNT,
            seed,
        });
    }
    for (len, n) in [(400, 10), (2000, 20)] {
        let out = check_cesaro_weak(len, n)?;
        tr.record(Check::CesaroWeak, out, || Inputs::Range {
            m: len as u64,
            n: n as u64,
        });
    }
    Ok(())
}

// ---- catalog demos ----

fn check_cauchy_demo(t: &QuasiTriple) -> CheckResult {
    let small = cauchy_demo(1, 3)?;
    let large = cauchy_demo(10, 1_000_000)?;
    let residual = [
        (small.plus_increment - 7.0 / 6.0).abs(),
        (small.pivot_increment - 3f64.sqrt()).abs(),
        (large.plus_increment - 1.0 / 3.0).max(0.0),
        (999.0 - large.pivot_increment).max(0.0),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(Outcome::new(residual, t.tolerance().algebraic_tol))
}

/// Compares `cauchy_demo(m, n)` with norms of `Σ e₋ᵢ` in the weighted instance.
fn check_cauchy_triple(t: &QuasiTriple, m: u64, n: u64) -> CheckResult {
    let ell2 = paper_ell2_triple().triple;
    let v = CoeffVector::from_real(
        IndexSet::SymmetricIntegers,
        (m..=n).map(|i| (-(i as i64), 1.0)),
    )?;
    let c = cauchy_demo(m, n)?;
    let plus = ell2.plus_norm(&v)?;
    let residual = relative((c.plus_increment - plus).abs(), plus).max(relative(
        (c.pivot_increment - pivot_norm(&v)).abs(),
        pivot_norm(&v),
    ));
    Ok(Outcome::new(residual, t.tolerance().algebraic_tol))
}

fn check_ell2_norms(t: &QuasiTriple) -> CheckResult {
    let ell2 = paper_ell2_triple().triple;
    let e2 = ell2.basis(2)?;
    let em2 = ell2.basis(-2)?;
    let residual = [
        (ell2.plus_norm(&e2)? - 2.0).abs() / 2.0,
        (ell2.minus_norm(&e2)? - 0.5).abs() / 0.5,
        (ell2.plus_norm(&em2)? - 0.5).abs() / 0.5,
        (ell2.minus_norm(&em2)? - 2.0).abs() / 2.0,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(Outcome::new(residual, t.tolerance().algebraic_tol))
}

fn to_complex(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

fn from_complex(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn check_holder(p: f64, f: &[[f64; 2]], g: &[[f64; 2]]) -> CheckResult {
    let lp = lp_discrete_triple(p, f.len())?;
    let h = lp.holder_check(
        &lp.grid_function(to_complex(f))?,
        &lp.grid_function(to_complex(g))?,
    )?;
    Ok(Outcome::new((h.ratio - 1.0).max(0.0), HOLDER_SLACK))
}

fn check_holder_equality(p: f64, f: &[[f64; 2]]) -> CheckResult {
    let lp = lp_discrete_triple(p, f.len())?;
    let f = lp.grid_function(to_complex(f))?;
    let g = lp.holder_partner(&f)?;
    let h = lp.holder_check(&f, &g)?;
    Ok(Outcome::new((h.ratio - 1.0).abs(), 1e-12))
}

fn random_grid(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let scale = 10f64.powf(rng.random_range(-3.0..3.0));
    (0..n)
        .map(|_| gelfand_core::sampling::complex_gaussian(rng) * scale)
        .collect()
}

fn catalog_suite(
    tr: &mut Tracker,
    t: &QuasiTriple,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(), gelfand_core::Error> {
    tr.record(Check::CauchyDemo, check_cauchy_demo(t)?, || Inputs::None);
    tr.record(Check::Ell2Norms, check_ell2_norms(t)?, || Inputs::None);
    for _ in 0..samples.min(50) {
        let m = rng.random_range(1..=CAUCHY_WINDOW);
        let n = rng.random_range(m..=CAUCHY_WINDOW);
        let out = check_cauchy_triple(t, m, n)?;
        tr.record(Check::CauchyTriple, out, || Inputs::Range { m, n });
    }
    for p in HOLDER_EXPONENTS {
        for n in HOLDER_GRIDS {
            for _ in 0..samples {
                let f = from_complex(&random_grid(rng, n));
                let g = from_complex(&random_grid(rng, n));
                let out = check_holder(p, &f, &g)?;
                tr.record(Check::Holder, out, || Inputs::Grid { p, f, g });
            }
            let f = from_complex(&random_grid(rng, n));
            let out = check_holder_equality(p, &f)?;
            tr.record(Check::HolderEquality, out, || Inputs::Grid {
                p,
                f,
                g: Vec::new(),
            });
        }
    }
    Ok(())
}
