use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Finite union of half-open intervals `(a, b]` inside `[0, ∞]`.
///
/// Cuts passed to [`decompose`](crate::decomp::decompose) live on the scale of
/// the spectrum of `G^{1/2}` (i.e. `√λ`), not on the eigenvalues of `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn single(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![(lo, hi)])
    }

    /// `(0, 1]`, the default cut.
    pub fn unit() -> Self {
        Self {
            intervals: vec![(0.0, 1.0)],
        }
    }

    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidInterval {
                lo: f64::NAN,
                hi: f64::NAN,
                reason: "empty interval list".into(),
            });
        }
        for &(lo, hi) in &intervals {
            if lo.is_nan() || hi.is_nan() || lo < 0.0 || lo >= hi || lo.is_infinite() {
                return Err(Error::InvalidInterval {
                    lo,
                    hi,
                    reason: "require 0 <= a < b <= inf".into(),
                });
            }
        }
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (lo, hi) in intervals {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        Ok(Self { intervals: merged })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo < x && x <= hi)
    }

    pub fn is_bounded(&self) -> bool {
        self.intervals.iter().all(|&(_, hi)| hi.is_finite())
    }

    pub fn lower(&self) -> f64 {
        self.intervals[0].0
    }

    pub fn upper(&self) -> f64 {
        self.intervals[self.intervals.len() - 1].1
    }

    /// Complement inside `(0, ∞)`; `(0, ∞)` itself has an empty complement,
    /// reported as `None` by [`IntervalSet::try_complement`].
    pub fn complement(&self) -> IntervalSet {
        self.try_complement()
            .expect("complement of (0, inf) is empty")
    }

    pub fn try_complement(&self) -> Option<IntervalSet> {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for &(lo, hi) in &self.intervals {
            if lo > cursor {
                out.push((cursor, lo));
            }
            cursor = hi;
        }
        if cursor.is_finite() {
            out.push((cursor, f64::INFINITY));
        }
        (!out.is_empty()).then_some(IntervalSet { intervals: out })
    }

    /// All finite, strictly positive interval endpoints.
    pub fn finite_positive_endpoints(&self) -> Vec<f64> {
        self.intervals
            .iter()
            .flat_map(|&(lo, hi)| [lo, hi])
            .filter(|x| x.is_finite() && *x > 0.0)
            .collect()
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (lo, hi)) in self.intervals.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            if hi.is_infinite() {
                write!(f, "{lo}:inf")?;
            } else {
                write!(f, "{lo}:{hi}")?;
            }
        }
        Ok(())
    }
}

/// Parses `"a:b[,c:d...]"`, each pair meaning `(a, b]`; `inf` is accepted.
impl FromStr for IntervalSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_bound = |t: &str| -> Result<f64> {
            let t = t.trim();
            if t.eq_ignore_ascii_case("inf") {
                Ok(f64::INFINITY)
            } else {
                t.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad interval bound `{t}`")))
            }
        };
        let intervals = s
            .split(',')
            .map(|piece| {
                let (a, b) = piece
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("interval `{piece}` is not `a:b`")))?;
                Ok((parse_bound(a)?, parse_bound(b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        IntervalSet::new(intervals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_open_membership() {
        let unit = IntervalSet::unit();
        assert!(unit.contains(1.0));
        assert!(!unit.contains(0.0));
        assert!(!unit.contains(1.0 + f64::EPSILON));
        let c = unit.complement();
        assert_eq!(c.intervals(), &[(1.0, f64::INFINITY)]);
        assert!(!c.contains(1.0));
    }

    #[test]
    fn complement_of_band() {
        let band: IntervalSet = "1:2".parse().unwrap();
        let c = band.complement();
        assert_eq!(c.intervals(), &[(0.0, 1.0), (2.0, f64::INFINITY)]);
        assert!(IntervalSet::single(0.0, f64::INFINITY)
            .unwrap()
            .try_complement()
            .is_none());
    }

    #[test]
    fn invalid_intervals() {
        assert!(matches!(
            IntervalSet::single(2.0, 1.0),
            Err(Error::InvalidInterval { .. })
        ));
        assert!(IntervalSet::single(1.0, 1.0).is_err());
        assert!(IntervalSet::single(-1.0, 1.0).is_err());
        assert!("0-1".parse::<IntervalSet>().is_err());
    }

    #[test]
    fn overlapping_pieces_merge() {
        let s: IntervalSet = "0:1,0.5:2,3:inf".parse().unwrap();
        assert_eq!(s.intervals(), &[(0.0, 2.0), (3.0, f64::INFINITY)]);
        assert!(!s.is_bounded());
        assert_eq!(s.to_string(), "0:2,3:inf");
    }
}
