//! Finite unions of rational intervals with per-endpoint inclusion flags.
//!
//! An [`IntervalSet`] is always normalized: parts are non-empty, sorted,
//! pairwise disjoint and never mergeable. Two parts `[p,q]` and `(q,r]`
//! are merged; `(p,q)` and `(q,r)` are kept apart because `q` is missing.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

/// A non-empty interval. A degenerate interval `lo == hi` is a single
/// point and always has both flags set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct Interval {
    #[serde(with = "rational::serde_str")]
    lo: Rational,
    #[serde(with = "rational::serde_str")]
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

#[derive(Deserialize)]
struct RawInterval {
    #[serde(with = "rational::serde_str")]
    lo: Rational,
    #[serde(with = "rational::serde_str")]
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

impl TryFrom<RawInterval> for Interval {
    type Error = String;

    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        Interval::new(raw.lo.clone(), raw.lo_closed, raw.hi.clone(), raw.hi_closed).ok_or_else(
            || format!("empty interval lo={} hi={} (flags {}, {})", raw.lo, raw.hi, raw.lo_closed, raw.hi_closed),
        )
    }
}

impl Interval {
    /// Builds an interval, or `None` if the flagged range is empty.
    pub fn new(lo: Rational, lo_closed: bool, hi: Rational, hi_closed: bool) -> Option<Self> {
        match lo.cmp(&hi) {
            Ordering::Less => Some(Interval { lo, hi, lo_closed, hi_closed }),
            Ordering::Equal if lo_closed && hi_closed => Some(Interval { lo, hi, lo_closed, hi_closed }),
            _ => None,
        }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Option<Self> {
        Self::new(lo, true, hi, true)
    }

    pub fn open(lo: Rational, hi: Rational) -> Option<Self> {
        Self::new(lo, false, hi, false)
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x, lo_closed: true, hi_closed: true }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above_lo = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below_hi = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above_lo && below_hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, lo_closed, hi, hi_closed)
    }

    /// True if every point of `self` lies in `other`.
    pub fn is_within(&self, other: &Interval) -> bool {
        self.intersect(other).as_ref() == Some(self)
    }

    /// Image under `x -> scale * x + offset`. A zero scale collapses the
    /// interval to the point `offset`; a negative scale swaps the flags.
    pub fn affine_image(&self, scale: &Rational, offset: &Rational) -> Interval {
        let map = |x: &Rational| scale * x + offset;
        if scale.is_zero() {
            Interval::point(offset.clone())
        } else if scale.is_positive() {
            Interval { lo: map(&self.lo), hi: map(&self.hi), lo_closed: self.lo_closed, hi_closed: self.hi_closed }
        } else {
            Interval { lo: map(&self.hi), hi: map(&self.lo), lo_closed: self.hi_closed, hi_closed: self.lo_closed }
        }
    }

    /// `{y - x : x in self, y in later}`.
    pub fn differences_to(&self, later: &Interval) -> Interval {
        Interval {
            lo: &later.lo - &self.hi,
            hi: &later.hi - &self.lo,
            lo_closed: later.lo_closed && self.hi_closed,
            hi_closed: later.hi_closed && self.lo_closed,
        }
    }

    /// The part of `self` lying strictly above zero.
    pub fn positive_part(&self) -> Option<Interval> {
        if self.lo.is_positive() {
            return Some(self.clone());
        }
        Interval::new(Rational::zero(), false, self.hi.clone(), self.hi_closed)
    }

    /// `{m - x : x in self}`.
    pub fn reflect(&self, m: &Rational) -> Interval {
        Interval {
            lo: m - &self.hi,
            hi: m - &self.lo,
            lo_closed: self.hi_closed,
            hi_closed: self.lo_closed,
        }
    }

    fn closure(&self) -> Interval {
        Interval { lo: self.lo.clone(), hi: self.hi.clone(), lo_closed: true, hi_closed: true }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{open}{},{}{close}", self.lo, self.hi)
    }
}

/// Normalized finite union of [`Interval`]s.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Interval>", into = "Vec<Interval>")]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl From<Vec<Interval>> for IntervalSet {
    fn from(parts: Vec<Interval>) -> Self {
        IntervalSet::from_parts(parts)
    }
}

impl From<IntervalSet> for Vec<Interval> {
    fn from(s: IntervalSet) -> Self {
        s.parts
    }
}

impl From<Interval> for IntervalSet {
    fn from(i: Interval) -> Self {
        IntervalSet { parts: vec![i] }
    }
}

impl FromIterator<Interval> for IntervalSet {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        IntervalSet::from_parts(iter.into_iter().collect())
    }
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    /// Normalizes an arbitrary collection of (possibly overlapping) parts.
    pub fn from_parts(mut parts: Vec<Interval>) -> Self {
        // Closed lower endpoints sort first so a merged run keeps them.
        parts.sort_by(|x, y| x.lo.cmp(&y.lo).then_with(|| y.lo_closed.cmp(&x.lo_closed)));
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for next in parts {
            if let Some(cur) = merged.last_mut() {
                let touches = match next.lo.cmp(&cur.hi) {
                    Ordering::Less => true,
                    Ordering::Equal => cur.hi_closed || next.lo_closed,
                    Ordering::Greater => false,
                };
                if touches {
                    match next.hi.cmp(&cur.hi) {
                        Ordering::Greater => {
                            cur.hi = next.hi;
                            cur.hi_closed = next.hi_closed;
                        }
                        Ordering::Equal => cur.hi_closed |= next.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            merged.push(next);
        }
        IntervalSet { parts: merged }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_parts(self.parts.iter().chain(&other.parts).cloned().collect())
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for s in &self.parts {
            for t in &other.parts {
                out.extend(s.intersect(t));
            }
        }
        IntervalSet::from_parts(out)
    }

    /// `bounds` minus `self`.
    pub fn complement_within(&self, bounds: &Interval) -> IntervalSet {
        let inside = self.intersect(&bounds.clone().into());
        let mut gaps = Vec::new();
        let (mut lo, mut lo_closed) = (bounds.lo.clone(), bounds.lo_closed);
        for part in &inside.parts {
            gaps.extend(Interval::new(lo, lo_closed, part.lo.clone(), !part.lo_closed));
            lo = part.hi.clone();
            lo_closed = !part.hi_closed;
        }
        gaps.extend(Interval::new(lo, lo_closed, bounds.hi.clone(), bounds.hi_closed));
        IntervalSet::from_parts(gaps)
    }

    /// `self` minus `other`.
    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        match self.hull() {
            Some(hull) => self.intersect(&other.complement_within(&hull)),
            None => IntervalSet::empty(),
        }
    }

    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Lebesgue measure; endpoint flags are irrelevant.
    pub fn measure(&self) -> Rational {
        self.parts.iter().map(Interval::length).sum()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        // Parts are sorted, so only the last part starting at or before x can hold it.
        let idx = self.parts.partition_point(|p| p.lo <= *x);
        idx > 0 && self.parts[idx - 1].contains(x)
    }

    /// `{m - x : x in self}`.
    pub fn reflect(&self, m: &Rational) -> IntervalSet {
        IntervalSet::from_parts(self.parts.iter().map(|p| p.reflect(m)).collect())
    }

    /// Topological closure: every endpoint becomes included.
    pub fn closure(&self) -> IntervalSet {
        IntervalSet::from_parts(self.parts.iter().map(Interval::closure).collect())
    }

    pub fn positive_part(&self) -> IntervalSet {
        IntervalSet::from_parts(self.parts.iter().filter_map(Interval::positive_part).collect())
    }

    /// Smallest closed interval holding the set.
    pub fn hull(&self) -> Option<Interval> {
        let first = self.parts.first()?;
        let last = self.parts.last()?;
        Interval::closed(first.lo.clone(), last.hi.clone())
    }

    /// Largest element, if the supremum is attained.
    pub fn max(&self) -> Option<&Rational> {
        self.parts.last().filter(|p| p.hi_closed).map(|p| &p.hi)
    }

    /// Parts that are single points.
    pub fn isolated_points(&self) -> impl Iterator<Item = &Rational> {
        self.parts.iter().filter(|p| p.is_point()).map(|p| &p.lo)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, q};
    use proptest::prelude::*;

    fn iv(lo: &str, lo_closed: bool, hi: &str, hi_closed: bool) -> Interval {
        Interval::new(q(lo), lo_closed, q(hi), hi_closed).unwrap()
    }

    fn set(parts: &[Interval]) -> IntervalSet {
        IntervalSet::from_parts(parts.to_vec())
    }

    #[test]
    fn empty_intervals_are_rejected() {
        assert!(Interval::new(int(1), true, int(0), true).is_none());
        assert!(Interval::new(int(1), false, int(1), true).is_none());
        assert!(Interval::new(int(1), true, int(1), true).is_some());
    }

    #[test]
    fn union_merges_closed_open_neighbours() {
        let s = set(&[iv("0", true, "1/2", true)]);
        let t = set(&[iv("1/2", false, "1", true)]);
        assert_eq!(s.union(&t), set(&[iv("0", true, "1", true)]));
        assert_eq!(s.union(&t).parts().len(), 1);
    }

    #[test]
    fn union_keeps_missing_point_apart() {
        let s = set(&[iv("0", false, "1", false)]);
        let t = set(&[iv("1", false, "2", false)]);
        assert_eq!(s.union(&t).parts().len(), 2);
    }

    #[test]
    fn union_with_empty_is_identity() {
        let s = set(&[iv("0", true, "1", true)]);
        assert_eq!(s.union(&IntervalSet::empty()), s);
    }

    #[test]
    fn measure_ignores_flags() {
        let s = set(&[iv("0", false, "1", true), iv("2", true, "3", true)]);
        assert_eq!(s.measure(), int(2));
        assert_eq!(set(&[Interval::point(int(5))]).measure(), int(0));
        let t = set(&[iv("0", false, "1/3", true), iv("1/3", false, "1", true)]);
        assert_eq!(t.parts().len(), 1);
        assert_eq!(t.measure(), int(1));
    }

    #[test]
    fn membership_respects_flags() {
        let s = set(&[iv("0", false, "1", true)]);
        assert!(!s.contains(&int(0)));
        assert!(s.contains(&int(1)));
        assert!(s.contains(&frac(1, 2)));
        assert!(!IntervalSet::empty().contains(&int(0)));
    }

    #[test]
    fn reflection_swaps_flags() {
        let unit = set(&[iv("0", true, "1", true)]);
        assert_eq!(unit.reflect(&int(1)), unit);
        let two = set(&[iv("0", true, "1", true), iv("2", true, "3", true)]);
        assert_eq!(two.reflect(&int(3)), two);
        let half_open = set(&[iv("0", false, "1", true)]);
        assert_eq!(half_open.reflect(&int(2)), set(&[iv("1", true, "2", false)]));
    }

    #[test]
    fn intersection_and_complement() {
        let a = set(&[iv("0", true, "2", true)]);
        let b = set(&[iv("1", true, "3", true)]);
        assert_eq!(a.intersect(&b), set(&[iv("1", true, "2", true)]));

        let open = set(&[iv("0", false, "1", false)]);
        let unit = iv("0", true, "1", true);
        assert_eq!(
            open.complement_within(&unit),
            set(&[Interval::point(int(0)), Interval::point(int(1))])
        );
        assert!(open.intersect(&set(&[iv("1", true, "2", true)])).is_empty());
    }

    #[test]
    fn max_requires_attained_supremum() {
        assert_eq!(set(&[iv("0", true, "1", true)]).max(), Some(&int(1)));
        assert_eq!(set(&[iv("0", true, "1", false)]).max(), None);
    }

    #[test]
    fn display_uses_interval_notation() {
        let s = set(&[iv("0", false, "2", true), Interval::point(int(3))]);
        assert_eq!(s.to_string(), "(0,2] ∪ {3}");
        assert_eq!(IntervalSet::empty().to_string(), "∅");
    }

    #[test]
    fn json_encoding() {
        let s = set(&[iv("0", false, "1/2", true)]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"[{"lo":"0","hi":"1/2","lo_closed":false,"hi_closed":true}]"#);
        let back: IntervalSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        // Unnormalized input is normalized on the way in.
        let messy = r#"[{"lo":"1/2","hi":"1","lo_closed":false,"hi_closed":true},
                        {"lo":"0","hi":"1/2","lo_closed":true,"hi_closed":true}]"#;
        let parsed: IntervalSet = serde_json::from_str(messy).unwrap();
        assert_eq!(parsed, set(&[iv("0", true, "1", true)]));
        let empty = r#"[{"lo":"1","hi":"1","lo_closed":false,"hi_closed":true}]"#;
        assert!(serde_json::from_str::<IntervalSet>(empty).is_err());
    }

    fn arb_interval() -> impl Strategy<Value = Interval> {
        (0i64..24, 0i64..6, any::<bool>(), any::<bool>()).prop_filter_map(
            "empty",
            |(lo, len, lc, hc)| Interval::new(frac(lo, 4), lc, frac(lo + len, 4), hc),
        )
    }

    fn arb_set() -> impl Strategy<Value = IntervalSet> {
        prop::collection::vec(arb_interval(), 0..6).prop_map(IntervalSet::from_parts)
    }

    fn probe_points() -> Vec<Rational> {
        (-2..=68).map(|k| frac(k, 8)).collect()
    }

    fn is_normalized(s: &IntervalSet) -> bool {
        s.parts().windows(2).all(|w| {
            w[0].hi < w[1].lo || (w[0].hi == w[1].lo && !w[0].hi_closed && !w[1].lo_closed)
        })
    }

    proptest! {
        #[test]
        fn set_ops_agree_with_membership(s in arb_set(), t in arb_set()) {
            let bounds = Interval::closed(int(0), int(7)).unwrap();
            let u = s.union(&t);
            let i = s.intersect(&t);
            let c = s.complement_within(&bounds);
            let d = s.difference(&t);
            for x in probe_points() {
                prop_assert_eq!(u.contains(&x), s.contains(&x) || t.contains(&x));
                prop_assert_eq!(i.contains(&x), s.contains(&x) && t.contains(&x));
                prop_assert_eq!(c.contains(&x), bounds.contains(&x) && !s.contains(&x));
                prop_assert_eq!(d.contains(&x), s.contains(&x) && !t.contains(&x));
            }
            for r in [&u, &i, &c, &d] {
                prop_assert!(is_normalized(r));
            }
        }

        #[test]
        fn measure_is_modular(s in arb_set(), t in arb_set()) {
            prop_assert_eq!(
                s.union(&t).measure() + s.intersect(&t).measure(),
                s.measure() + t.measure()
            );
        }

        #[test]
        fn reflection_preserves_measure_and_membership(s in arb_set(), m in -8i64..16) {
            let m = frac(m, 2);
            let r = s.reflect(&m);
            prop_assert_eq!(r.measure(), s.measure());
            for x in probe_points() {
                prop_assert_eq!(r.contains(&(&m - &x)), s.contains(&x));
            }
        }

        #[test]
        fn normalization_is_idempotent(s in arb_set()) {
            prop_assert!(is_normalized(&s));
            prop_assert_eq!(IntervalSet::from_parts(s.parts().to_vec()), s);
        }
    }
}
