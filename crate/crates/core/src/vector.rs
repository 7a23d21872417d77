//! Index sets, finitely supported coefficient vectors and the pivot inner
//! product.
//!
//! Every element of `D₊ ∩ D₋` that the crate manipulates is a finite linear
//! combination of the orthonormal basis `(eᵢ)` of the pivot space, so a
//! [`CoeffVector`] stores exactly its nonzero coefficients. Zero entries are
//! pruned on construction which makes equality canonical and the support size
//! a faithful cost measure.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Scalar = Complex64;

pub const ZERO: Scalar = Complex64::new(0.0, 0.0);
pub const ONE: Scalar = Complex64::new(1.0, 0.0);

/// Index set of an orthonormal basis of the pivot space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexSet {
    /// Indices `1..=n`.
    Finite(usize),
    /// All nonzero integers, as in `ℓ²(ℤ \ {0})`.
    SymmetricIntegers,
}

impl IndexSet {
    pub fn contains(&self, index: i64) -> bool {
        match *self {
            IndexSet::Finite(n) => index >= 1 && (index as u64) <= n as u64,
            IndexSet::SymmetricIntegers => index != 0,
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match *self {
            IndexSet::Finite(n) => Some(n),
            IndexSet::SymmetricIntegers => None,
        }
    }

    pub(crate) fn ensure_same(&self, other: &IndexSet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::mismatch(self, other))
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSet::Finite(n) => write!(f, "finite:{n}"),
            IndexSet::SymmetricIntegers => write!(f, "symmetric"),
        }
    }
}

impl FromStr for IndexSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "symmetric" {
            return Ok(IndexSet::SymmetricIntegers);
        }
        let n = s
            .strip_prefix("finite:")
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Parse(format!("unknown index set `{s}`")))?;
        Ok(IndexSet::Finite(n))
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finitely supported complex coefficient vector over an [`IndexSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    index_set: IndexSet,
    entries: BTreeMap<i64, Scalar>,
}

impl CoeffVector {
    pub fn zero(index_set: IndexSet) -> Self {
        Self {
            index_set,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a vector from `(index, value)` pairs. Zero values are dropped,
    /// repeated indices are rejected.
    pub fn from_entries<I>(index_set: IndexSet, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Scalar)>,
    {
        let mut map = BTreeMap::new();
        for (i, v) in entries {
            if !index_set.contains(i) {
                return Err(Error::IndexOutOfSet {
                    index: i,
                    set: index_set,
                });
            }
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Parse(format!("non-finite coefficient at index {i}")));
            }
            if map.insert(i, v).is_some() {
                return Err(Error::Parse(format!("duplicate index {i}")));
            }
        }
        map.retain(|_, v| *v != ZERO);
        Ok(Self {
            index_set,
            entries: map,
        })
    }

    /// Same as [`CoeffVector::from_entries`] with real coefficients.
    pub fn from_real<I>(index_set: IndexSet, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, f64)>,
    {
        Self::from_entries(
            index_set,
            entries
                .into_iter()
                .map(|(i, v)| (i, Complex64::new(v, 0.0))),
        )
    }

    /// The basis vector `eᵢ`.
    pub fn basis(index_set: IndexSet, index: i64) -> Result<Self> {
        Self::from_entries(index_set, [(index, ONE)])
    }

    /// Dense vector over a finite index set, entry `k` at index `k + 1`.
    pub fn from_dense(index_set: IndexSet, values: &DVector<Scalar>) -> Result<Self> {
        match index_set {
            IndexSet::Finite(n) if n == values.len() => Self::from_entries(
                index_set,
                values.iter().enumerate().map(|(k, v)| (k as i64 + 1, *v)),
            ),
            _ => Err(Error::DimensionMismatch(format!(
                "dense vector of length {} over {index_set}",
                values.len()
            ))),
        }
    }

    pub fn to_dense(&self) -> Result<DVector<Scalar>> {
        let n = self.index_set.dim().ok_or_else(|| {
            Error::DimensionMismatch("symmetric-integer vectors have no dense form".into())
        })?;
        let mut out = DVector::from_element(n, ZERO);
        for (&i, v) in &self.entries {
            out[i as usize - 1] = *v;
        }
        Ok(out)
    }

    pub fn index_set(&self) -> IndexSet {
        self.index_set
    }

    pub fn get(&self, index: i64) -> Scalar {
        self.entries.get(&index).copied().unwrap_or(ZERO)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Scalar)> + '_ {
        self.entries.iter().map(|(&i, &v)| (i, v))
    }

    /// Entrywise map `vᵢ ↦ φ(i, vᵢ)`; results that vanish are pruned.
    pub fn map_indexed(&self, mut phi: impl FnMut(i64, Scalar) -> Scalar) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(&i, &v)| (i, phi(i, v)))
            .filter(|(_, v)| *v != ZERO)
            .collect();
        Self {
            index_set: self.index_set,
            entries,
        }
    }

    /// Keeps the entries whose index satisfies `keep`.
    pub fn filter_indices(&self, mut keep: impl FnMut(i64) -> bool) -> Self {
        Self {
            index_set: self.index_set,
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| keep(**i))
                .map(|(&i, &v)| (i, v))
                .collect(),
        }
    }

    pub fn scale(&self, a: Scalar) -> Self {
        self.map_indexed(|_, v| a * v)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        vec_axpy(ONE, other, self)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        vec_axpy(-ONE, other, self)
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// `⟨f, g⟩₀ = Σ fᵢ·conj(gᵢ)`, linear in `f` and antilinear in `g`.
pub fn pivot_inner(f: &CoeffVector, g: &CoeffVector) -> Result<Scalar> {
    f.index_set.ensure_same(&g.index_set)?;
    let (small, large, flip) = if f.len() <= g.len() {
        (f, g, false)
    } else {
        (g, f, true)
    };
    let mut acc = ZERO;
    for (i, a) in small.iter() {
        if let Some(b) = large.entries.get(&i) {
            acc += if flip { b * a.conj() } else { a * b.conj() };
        }
    }
    Ok(acc)
}

/// `‖f‖₀`.
pub fn pivot_norm(f: &CoeffVector) -> f64 {
    f.entries.values().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `a·f + g` with vanishing entries pruned.
pub fn vec_axpy(a: Scalar, f: &CoeffVector, g: &CoeffVector) -> Result<CoeffVector> {
    f.index_set.ensure_same(&g.index_set)?;
    let mut entries = g.entries.clone();
    for (i, v) in f.iter() {
        let slot = entries.entry(i).or_insert(ZERO);
        *slot += a * v;
    }
    entries.retain(|_, v| *v != ZERO);
    Ok(CoeffVector {
        index_set: g.index_set,
        entries,
    })
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    i: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffVectorJson {
    index_set: IndexSet,
    entries: Vec<EntryJson>,
}

impl Serialize for CoeffVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffVectorJson {
            index_set: self.index_set,
            entries: self
                .iter()
                .map(|(i, v)| EntryJson {
                    i,
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoeffVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = CoeffVectorJson::deserialize(deserializer)?;
        CoeffVector::from_entries(
            raw.index_set,
            raw.entries
                .into_iter()
                .map(|e| (e.i, Complex64::new(e.re, e.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}
