//! Weight families on `ℤ \ {0}` for analytic diagonal Gram operators.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::interval::IntervalSet;
use crate::error::{Error, Result};

/// Diagonal weights `w(i) > 0` over the nonzero integers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSpec {
    /// `w(n) = n²` and `w(−n) = 1/n²` for `n > 0`.
    PaperEll2,
    /// `w(n) = nᵅ` for `n > 0`; for `n < 0`, `|n|^{−α}` if `mirror` else `|n|ᵅ`.
    Power { alpha: f64, mirror: bool },
    /// Explicit weights with a default for every other index.
    Table {
        entries: BTreeMap<i64, f64>,
        default_weight: f64,
    },
}

impl WeightSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            WeightSpec::PaperEll2 => Ok(()),
            WeightSpec::Power { alpha, .. } if alpha.is_finite() => Ok(()),
            WeightSpec::Power { alpha, .. } => Err(Error::Parse(format!(
                "power weight exponent must be finite, got {alpha}"
            ))),
            WeightSpec::Table {
                entries,
                default_weight,
            } => {
                if entries.contains_key(&0) {
                    return Err(Error::Parse("weight table contains index 0".into()));
                }
                let bad = entries
                    .values()
                    .chain(std::iter::once(default_weight))
                    .find(|w| !(**w > 0.0 && w.is_finite()));
                match bad {
                    None => Ok(()),
                    Some(&w) => Err(Error::NotInjective {
                        min_eigenvalue: w,
                        max_eigenvalue: entries.values().fold(*default_weight, |a, &b| a.max(b)),
                    }),
                }
            }
        }
    }

    /// `w(i)`.
    pub fn weight(&self, index: i64) -> f64 {
        self.weight_pow(index, 1.0)
    }

    /// `w(i)^p`, evaluated from the closed form so that e.g. `w(−3)^{−1} = 9`
    /// exactly for the weighted `ℓ²` instance.
    pub fn weight_pow(&self, index: i64, p: f64) -> f64 {
        debug_assert!(index != 0);
        match self {
            WeightSpec::PaperEll2 => {
                let n = index.unsigned_abs() as f64;
                let e = if index > 0 { 2.0 * p } else { -2.0 * p };
                int_pow(n, e)
            }
            WeightSpec::Power { alpha, mirror } => {
                let n = index.unsigned_abs() as f64;
                let e = if index < 0 && *mirror {
                    -alpha * p
                } else {
                    alpha * p
                };
                int_pow(n, e)
            }
            WeightSpec::Table {
                entries,
                default_weight,
            } => {
                let w = entries.get(&index).copied().unwrap_or(*default_weight);
                if p == 0.5 {
                    w.sqrt()
                } else if p == 1.0 {
                    w
                } else {
                    w.powf(p)
                }
            }
        }
    }

    /// Reciprocal family `1/w`.
    pub fn inverse(&self) -> WeightSpec {
        match self {
            WeightSpec::PaperEll2 => WeightSpec::Power {
                alpha: -2.0,
                mirror: true,
            },
            WeightSpec::Power { alpha, mirror } => WeightSpec::Power {
                alpha: -alpha,
                mirror: *mirror,
            },
            WeightSpec::Table {
                entries,
                default_weight,
            } => WeightSpec::Table {
                entries: entries.iter().map(|(&i, &w)| (i, 1.0 / w)).collect(),
                default_weight: 1.0 / default_weight,
            },
        }
    }

    /// `(inf w, sup w)` over all nonzero integers.
    pub fn weight_range(&self) -> (f64, f64) {
        match self {
            WeightSpec::PaperEll2 => (0.0, f64::INFINITY),
            WeightSpec::Power { alpha, mirror } => {
                if *alpha == 0.0 {
                    (1.0, 1.0)
                } else if *mirror {
                    (0.0, f64::INFINITY)
                } else if *alpha > 0.0 {
                    (1.0, f64::INFINITY)
                } else {
                    (0.0, 1.0)
                }
            }
            WeightSpec::Table {
                entries,
                default_weight,
            } => entries
                .values()
                .fold((*default_weight, *default_weight), |(lo, hi), &w| {
                    (lo.min(w), hi.max(w))
                }),
        }
    }

    /// Exponent `β` with `√w(s·k) = k^β` for large `k` on side `s`, or the
    /// constant tail value for tables.
    fn tail(&self, positive: bool) -> Tail {
        match self {
            WeightSpec::PaperEll2 => Tail::Power(if positive { 1.0 } else { -1.0 }),
            WeightSpec::Power { alpha, mirror } => {
                let a = if !positive && *mirror { -alpha } else { *alpha };
                if a == 0.0 {
                    Tail::Constant(1.0)
                } else {
                    Tail::Power(a / 2.0)
                }
            }
            WeightSpec::Table { default_weight, .. } => Tail::Constant(default_weight.sqrt()),
        }
    }

    /// Largest `k` on side `s` that has to be inspected individually before
    /// membership of `√w(s·k)` in `cut` stabilises.
    fn explicit_horizon(&self, positive: bool, cut: &IntervalSet) -> u64 {
        let table_max = match self {
            WeightSpec::Table { entries, .. } => entries
                .keys()
                .filter(|&&i| (i > 0) == positive)
                .map(|i| i.unsigned_abs())
                .max()
                .unwrap_or(0),
            _ => 0,
        };
        let power_horizon = match self.tail(positive) {
            Tail::Constant(_) => 0,
            Tail::Power(beta) => {
                // k^β crosses every finite positive endpoint before this k.
                let endpoints = cut.finite_positive_endpoints();
                let threshold = if beta > 0.0 {
                    endpoints.iter().cloned().fold(0.0, f64::max)
                } else {
                    endpoints.iter().cloned().fold(f64::INFINITY, f64::min)
                };
                if threshold.is_finite() && threshold > 0.0 {
                    threshold.powf(1.0 / beta).ceil().min(1e15) as u64 + 1
                } else {
                    1
                }
            }
        };
        table_max.max(power_horizon).max(1)
    }

    /// Indices whose `√w` lies in `cut`.
    pub fn predicate(&self, cut: &IntervalSet) -> Result<IndexPredicate> {
        let side = |positive: bool| -> Result<SideSet> {
            let horizon = self.explicit_horizon(positive, cut);
            if horizon > MAX_HORIZON {
                return Err(Error::InvalidInterval {
                    lo: cut.lower(),
                    hi: cut.upper(),
                    reason: format!(
                        "membership does not stabilise before index {MAX_HORIZON} for this weight family"
                    ),
                });
            }
            let sign = if positive { 1 } else { -1 };
            let listed: Vec<u64> = (1..=horizon)
                .filter(|&k| cut.contains(self.weight_pow(sign * k as i64, 0.5)))
                .collect();
            let tail_value = self.weight_pow(sign * (horizon as i64 + 1), 0.5);
            let tail = cut.contains(tail_value);
            Ok(SideSet::new(listed, horizon, tail))
        };
        Ok(IndexPredicate {
            positive: side(true)?,
            negative: side(false)?,
        })
    }

    /// `(inf, sup)` of `√w` over the indices selected by `pred`.
    pub fn sqrt_range(&self, pred: &IndexPredicate) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut any = false;
        for (positive, side) in [(true, &pred.positive), (false, &pred.negative)] {
            let sign = if positive { 1 } else { -1 };
            for &k in &side.listed {
                let v = self.weight_pow(sign * k as i64, 0.5);
                lo = lo.min(v);
                hi = hi.max(v);
                any = true;
            }
            if side.tail {
                any = true;
                let first = self.weight_pow(sign * (side.horizon as i64 + 1), 0.5);
                match self.tail(positive) {
                    Tail::Constant(c) => {
                        lo = lo.min(c);
                        hi = hi.max(c);
                    }
                    Tail::Power(beta) if beta > 0.0 => {
                        lo = lo.min(first);
                        hi = f64::INFINITY;
                    }
                    Tail::Power(_) => {
                        lo = 0.0;
                        hi = hi.max(first);
                    }
                }
            }
        }
        any.then_some((lo, hi))
    }
}

/// Largest index enumerated explicitly when resolving a cut.
const MAX_HORIZON: u64 = 1_000_000;

enum Tail {
    Power(f64),
    Constant(f64),
}

fn int_pow(n: f64, e: f64) -> f64 {
    if e.fract() == 0.0 && e.abs() <= 64.0 {
        let k = e as i32;
        if k >= 0 {
            n.powi(k)
        } else {
            1.0 / n.powi(-k)
        }
    } else if e == 0.5 {
        n.sqrt()
    } else {
        n.powf(e)
    }
}

/// Indices `k ≥ 1` on one side of `ℤ \ {0}`: an explicit list up to
/// `horizon` plus, if `tail`, every `k > horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideSet {
    listed: Vec<u64>,
    horizon: u64,
    tail: bool,
}

impl SideSet {
    fn new(listed: Vec<u64>, horizon: u64, tail: bool) -> Self {
        Self {
            listed,
            horizon,
            tail,
        }
    }

    fn contains(&self, k: u64) -> bool {
        if k > self.horizon {
            self.tail
        } else {
            self.listed.binary_search(&k).is_ok()
        }
    }

    /// Maximal runs `[a, b]` of listed indices; `b = None` marks a run that
    /// continues into the tail.
    fn runs(&self) -> Vec<(u64, Option<u64>)> {
        let mut out: Vec<(u64, Option<u64>)> = Vec::new();
        for &k in &self.listed {
            match out.last_mut() {
                Some((_, Some(b))) if *b + 1 == k => *b = k,
                _ => out.push((k, Some(k))),
            }
        }
        if self.tail {
            match out.last_mut() {
                Some((_, b)) if *b == Some(self.horizon) => *b = None,
                _ => out.push((self.horizon + 1, None)),
            }
        }
        out
    }

    fn count(&self) -> Option<usize> {
        (!self.tail).then_some(self.listed.len())
    }
}

/// A subset of `ℤ \ {0}` given by its positive and negative parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexPredicate {
    positive: SideSet,
    negative: SideSet,
}

impl IndexPredicate {
    pub fn contains(&self, index: i64) -> bool {
        match index.signum() {
            1 => self.positive.contains(index as u64),
            -1 => self.negative.contains(index.unsigned_abs()),
            _ => false,
        }
    }

    /// Number of indices, `None` when infinite.
    pub fn count(&self) -> Option<usize> {
        Some(self.positive.count()? + self.negative.count()?)
    }

    pub fn is_empty(&self) -> bool {
        self.count() == Some(0)
    }

    /// Human-readable description such as `{n >= 2}` or `{n <= 1}`.
    pub fn describe(&self) -> String {
        // Runs as (lo, hi) in n, `None` meaning unbounded on that end.
        let mut runs: Vec<(Option<i64>, Option<i64>)> = self
            .negative
            .runs()
            .into_iter()
            .map(|(a, b)| (b.map(|b| -(b as i64)), Some(-(a as i64))))
            .chain(
                self.positive
                    .runs()
                    .into_iter()
                    .map(|(a, b)| (Some(a as i64), b.map(|b| b as i64))),
            )
            .collect();
        runs.sort_by_key(|(lo, _)| lo.unwrap_or(i64::MIN));
        let mut merged: Vec<(Option<i64>, Option<i64>)> = Vec::new();
        for run in runs {
            match merged.last_mut() {
                Some(last) if last.1 == Some(-1) && run.0 == Some(1) => last.1 = run.1,
                _ => merged.push(run),
            }
        }
        let clauses: Vec<String> = merged
            .into_iter()
            .map(|(lo, hi)| range_clause(lo, hi))
            .collect();
        format!("{{{}}}", clauses.join(" or "))
    }
}

fn range_clause(lo: Option<i64>, hi: Option<i64>) -> String {
    match (lo, hi) {
        (None, None) => "n != 0".to_string(),
        (None, Some(h)) => format!("n <= {h}"),
        (Some(l), None) => format!("n >= {l}"),
        (Some(l), Some(h)) if l == h => format!("n = {l}"),
        (Some(l), Some(h)) => format!("{l} <= n <= {h}"),
    }
}

/// `Σ_{i ≥ a} 1/i²` by Euler–Maclaurin, accurate to double precision for `a ≥ 10⁴`.
fn euler_maclaurin_tail(a: f64) -> f64 {
    let inv = 1.0 / a;
    let inv2 = inv * inv;
    inv + 0.5 * inv2 + inv2 * inv / 6.0 - inv2 * inv2 * inv / 30.0 + inv2 * inv2 * inv2 * inv / 42.0
}

/// Direct summation is used up to this index; beyond it the closed tail.
pub const DIRECT_SUM_LIMIT: u64 = 1_000_000;

/// `Σ_{i=m}^{n} 1/i²` for `1 ≤ m ≤ n`: compensated summation up to
/// [`DIRECT_SUM_LIMIT`], closed-form tail difference beyond.
pub fn inverse_square_sum(m: u64, n: u64) -> f64 {
    assert!(m >= 1 && m <= n, "inverse_square_sum requires 1 <= m <= n");
    let direct_end = n.min(DIRECT_SUM_LIMIT.max(m.saturating_sub(1)));
    let mut sum = 0.0;
    if m <= direct_end {
        // Smallest terms first; Neumaier compensation.
        let mut comp = 0.0;
        for i in (m..=direct_end).rev() {
            let x = i as f64;
            let t = 1.0 / (x * x);
            let s = sum + t;
            if sum.abs() >= t.abs() {
                comp += (sum - s) + t;
            } else {
                comp += (t - s) + sum;
            }
            sum = s;
        }
        sum += comp;
    }
    let tail_start = direct_end.max(m - 1) + 1;
    if tail_start <= n {
        let upper = if n == u64::MAX {
            0.0
        } else {
            euler_maclaurin_tail(n as f64 + 1.0)
        };
        sum += euler_maclaurin_tail(tail_start as f64) - upper;
    }
    sum
}

/// `Σ_{i ≥ m} 1/i²`.
pub fn inverse_square_tail(m: u64) -> f64 {
    inverse_square_sum(m, u64::MAX)
}
