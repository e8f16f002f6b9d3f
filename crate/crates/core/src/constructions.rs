//! Generators for the function families used throughout the crate:
//! counterexamples for non-divisor lengths, bumps and bump trains, the
//! two sign-pattern examples on `[0, 3]`, and seeded random loops.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::{Interval, IntervalSet};
use crate::plfunc::PLFunction;
use crate::rational::{frac, int, positive_integer_quotient, Rational};

/// `f = p + m`, with `p` periodic of period `d` and `m` strictly monotone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleParts {
    pub p: PLFunction,
    pub m: PLFunction,
    pub f: PLFunction,
}

/// A loop on `[a, b]` with no chord of length `d`, for any `d` in
/// `(0, b - a)` that does not divide `b - a`.
///
/// `p` is the triangle wave `x -> dist(x - a, dZ)` and `m` the linear
/// ramp from `0` to `p(a) - p(b)`. For any `x`, `p(x + d) = p(x)` while
/// `m(x + d) != m(x)`, so `f(x + d) != f(x)`.
pub fn make_counterexample(a: &Rational, b: &Rational, d: &Rational) -> Result<CounterexampleParts> {
    let len = b - a;
    if !d.is_positive() || *d >= len {
        return Err(Error::domain(format!("d out of range: d = {d} must lie in (0, {len})")));
    }
    if let Some(quotient) = positive_integer_quotient(&len, d) {
        return Err(Error::DivisorDistance { d: Box::new(d.clone()), quotient: Box::new(quotient) });
    }
    let half = d / int(2);
    let mut points = Vec::new();
    let mut k = BigInt::zero();
    loop {
        let x = a + &half * Rational::from_integer(k.clone());
        if x >= *b {
            break;
        }
        let y = if k.is_even() { Rational::zero() } else { half.clone() };
        points.push((x, y));
        k += 1;
    }
    let r = (&len) - (&len / d).floor() * d;
    let tail = if r < (d - &r) { r.clone() } else { d - &r };
    points.push((b.clone(), tail.clone()));
    let p = PLFunction::new(points)?;
    let m = PLFunction::new(vec![(a.clone(), Rational::zero()), (b.clone(), -tail)])?;
    let f = p.add(&m)?;
    Ok(CounterexampleParts { p, m, f })
}

/// Triangular bump `[(a,0), ((a+b)/2, height), (b,0)]`.
pub fn single_bump(a: &Rational, b: &Rational, height: &Rational) -> Result<PLFunction> {
    if a >= b {
        return Err(Error::domain(format!("bump needs a < b, got [{a}, {b}]")));
    }
    if height.is_zero() {
        return Err(Error::domain("bump height must be nonzero"));
    }
    PLFunction::new(vec![
        (a.clone(), Rational::zero()),
        ((a + b) / int(2), height.clone()),
        (b.clone(), Rational::zero()),
    ])
}

/// Bumps on ordered intervals `[a_k, b_k]`, all of the same sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BumpSpec {
    pub intervals: Vec<(Rational, Rational)>,
    pub heights: Vec<Rational>,
    /// Where each peak sits inside its interval, as a fraction in (0, 1).
    /// Empty means every peak is centred.
    pub peaks: Vec<Rational>,
}

impl BumpSpec {
    pub fn new(intervals: Vec<(Rational, Rational)>, heights: Vec<Rational>) -> Self {
        BumpSpec { intervals, heights, peaks: Vec::new() }
    }

    pub fn with_peaks(mut self, peaks: Vec<Rational>) -> Self {
        self.peaks = peaks;
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.intervals.is_empty() {
            return bad("bump train needs at least one interval".into());
        }
        if self.heights.len() != self.intervals.len() {
            return bad(format!("{} intervals but {} heights", self.intervals.len(), self.heights.len()));
        }
        if !self.peaks.is_empty() && self.peaks.len() != self.intervals.len() {
            return bad(format!("{} intervals but {} peak positions", self.intervals.len(), self.peaks.len()));
        }
        for (k, (lo, hi)) in self.intervals.iter().enumerate() {
            if lo >= hi {
                return bad(format!("interval {k} is empty: [{lo}, {hi}]"));
            }
            if k > 0 && self.intervals[k - 1].1 > *lo {
                return bad(format!("interval {k} starts before interval {} ends", k - 1));
            }
        }
        if self.heights.iter().any(Zero::is_zero) {
            return bad("bump heights must be nonzero".into());
        }
        let positive = self.heights[0].is_positive();
        if self.heights.iter().any(|h| h.is_positive() != positive) {
            return bad("bump heights must share one sign".into());
        }
        if self.peaks.iter().any(|t| !t.is_positive() || *t >= int(1)) {
            return bad("peak positions must lie in (0, 1)".into());
        }
        Ok(())
    }
}

/// The train's function (zero between bumps) and the union `A` of its intervals.
pub fn bump_train(spec: &BumpSpec) -> Result<(PLFunction, IntervalSet)> {
    spec.validate()?;
    let mut points: Vec<(Rational, Rational)> = Vec::new();
    for (k, ((lo, hi), h)) in spec.intervals.iter().zip(&spec.heights).enumerate() {
        let t = spec.peaks.get(k).cloned().unwrap_or_else(|| frac(1, 2));
        let peak = lo + (hi - lo) * t;
        if points.last().map(|(x, _)| x) != Some(lo) {
            points.push((lo.clone(), Rational::zero()));
        }
        points.push((peak, h.clone()));
        points.push((hi.clone(), Rational::zero()));
    }
    let region = spec
        .intervals
        .iter()
        .map(|(lo, hi)| Interval::closed(lo.clone(), hi.clone()).expect("validated"))
        .collect();
    Ok((PLFunction::new(points)?, region))
}

/// The two sign-pattern examples on `[0, 3]`.
///
/// Variant 1: up-bump on `[0,1]`, down-bump on `[1,2]`, zero on `[2,3]`.
/// Variant 2: up-bump on `[0,1]`, zero on `[1,2]`, down-bump on `[2,3]`.
pub fn pathological_example(variant: u8) -> Result<PLFunction> {
    let pts: &[(i64, i64, i64)] = match variant {
        1 => &[(0, 1, 0), (1, 2, 1), (1, 1, 0), (3, 2, -1), (2, 1, 0), (3, 1, 0)],
        2 => &[(0, 1, 0), (1, 2, 1), (1, 1, 0), (2, 1, 0), (5, 2, -1), (3, 1, 0)],
        _ => return Err(Error::domain(format!("variant must be 1 or 2, got {variant}"))),
    };
    PLFunction::new(pts.iter().map(|&(n, d, y)| (frac(n, d), int(y))).collect())
}

/// Denominator bound for random y-values.
pub const RANDOM_VALUE_DENOMINATOR: i64 = 64;

/// A reproducible random loop with `breakpoint_count` breakpoints on
/// `[a, b]` and values in `value_range`.
///
/// Interior x-coordinates are distinct points of the grid
/// `a + k (b - a) / N`, and values lie on a grid of spacing
/// `(hi - lo) / 64` inside the range.
pub fn random_loop(
    seed: u64,
    breakpoint_count: usize,
    a: &Rational,
    b: &Rational,
    value_range: &Interval,
) -> Result<PLFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_loop_with(&mut rng, breakpoint_count, a, b, value_range)
}

pub(crate) fn random_loop_with<R: Rng>(
    rng: &mut R,
    breakpoint_count: usize,
    a: &Rational,
    b: &Rational,
    value_range: &Interval,
) -> Result<PLFunction> {
    if breakpoint_count < 2 {
        return Err(Error::domain("random loop needs at least 2 breakpoints"));
    }
    if a >= b {
        return Err(Error::domain(format!("random loop needs a < b, got [{a}, {b}]")));
    }
    let interior = breakpoint_count - 2;
    let grid = (2 * breakpoint_count).max(RANDOM_VALUE_DENOMINATOR as usize);
    let mut ticks: Vec<usize> = sample(rng, grid - 1, interior).into_iter().map(|k| k + 1).collect();
    ticks.sort_unstable();

    let (lo, hi) = (value_range.lo(), value_range.hi());
    let step = (hi - lo) / int(RANDOM_VALUE_DENOMINATOR);
    let value = |rng: &mut R| lo + &step * int(rng.gen_range(0..=RANDOM_VALUE_DENOMINATOR));

    let len = b - a;
    let end_value = value(rng);
    let mut points = vec![(a.clone(), end_value.clone())];
    for k in ticks {
        let x = a + &len * frac(k as i64, grid as i64);
        points.push((x, value(rng)));
    }
    points.push((b.clone(), end_value));
    PLFunction::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chords::{chord_set, chord_set_on, interior_chord_set};
    use crate::rational::q;

    fn unit_range() -> Interval {
        Interval::closed(int(-1), int(1)).unwrap()
    }

    #[test]
    fn counterexample_for_two_fifths() {
        let parts = make_counterexample(&int(0), &int(1), &frac(2, 5)).unwrap();
        assert_eq!(parts.p.evaluate(&int(1)).unwrap(), frac(1, 5));
        assert_eq!(parts.m, PLFunction::new(vec![(int(0), int(0)), (int(1), frac(-1, 5))]).unwrap());
        assert!(parts.f.is_closed_loop());
        let df = chord_set(&parts.f);
        assert!(!df.contains(&frac(2, 5)));
        for n in 1..=5 {
            assert!(df.contains(&frac(1, n)), "1/{n} missing from {df}");
        }
    }

    #[test]
    fn counterexample_parts_are_periodic_and_monotone() {
        for (a, b, d) in [("0", "1", "2/5"), ("-1", "2", "7/4"), ("1/3", "5/3", "3/10")] {
            let (a, b, d) = (q(a), q(b), q(d));
            let parts = make_counterexample(&a, &b, &d).unwrap();
            let len = &b - &a;
            for k in 0..=97 {
                let x = &a + (&len - &d) * frac(k, 97);
                assert_eq!(parts.p.evaluate(&(&x + &d)).unwrap(), parts.p.evaluate(&x).unwrap());
            }
            assert_eq!(parts.m.evaluate(&a).unwrap(), int(0));
            let slope = parts.m.evaluate(&b).unwrap();
            assert!(!slope.is_zero());
            assert_eq!(slope, parts.p.evaluate(&a).unwrap() - parts.p.evaluate(&b).unwrap());
            assert!(parts.f.is_closed_loop());
            assert!(!chord_set(&parts.f).contains(&d));
        }
    }

    #[test]
    fn counterexample_errors() {
        assert!(matches!(
            make_counterexample(&int(0), &int(1), &frac(1, 2)),
            Err(Error::DivisorDistance { .. })
        ));
        assert!(matches!(make_counterexample(&int(0), &int(1), &int(1)), Err(Error::Domain(_))));
        assert!(matches!(make_counterexample(&int(0), &int(1), &frac(7, 5)), Err(Error::Domain(_))));
        assert!(matches!(make_counterexample(&int(0), &int(1), &int(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn bumps() {
        let up = single_bump(&int(0), &int(1), &int(1)).unwrap();
        let down = single_bump(&int(0), &int(1), &int(-1)).unwrap();
        assert_eq!(chord_set(&up), chord_set(&down));
        let wide = single_bump(&int(0), &int(2), &int(1)).unwrap();
        assert_eq!(chord_set(&wide), Interval::new(int(0), false, int(2), true).unwrap().into());
        assert!(single_bump(&int(0), &int(1), &int(0)).is_err());
        assert!(single_bump(&int(1), &int(1), &int(1)).is_err());
    }

    #[test]
    fn train_of_two_bumps() {
        let spec = BumpSpec::new(vec![(int(0), int(1)), (int(2), int(3))], vec![int(2), int(1)]);
        let (f, region) = bump_train(&spec).unwrap();
        assert_eq!(f.evaluate(&frac(3, 2)).unwrap(), int(0));
        let d = chord_set_on(&f, &region).unwrap();
        assert!(IntervalSet::from(Interval::closed(int(2), int(3)).unwrap()).is_subset_of(&d));
    }

    #[test]
    fn train_of_one_bump_is_a_single_bump() {
        let spec = BumpSpec::new(vec![(int(0), int(1))], vec![int(1)]);
        let (f, region) = bump_train(&spec).unwrap();
        assert_eq!(f, single_bump(&int(0), &int(1), &int(1)).unwrap());
        assert_eq!(region, f.domain().into());
    }

    #[test]
    fn adjacent_equal_bumps() {
        let spec = BumpSpec::new(
            vec![(int(0), int(1)), (int(1), int(2)), (int(2), int(3))],
            vec![int(1), int(1), int(1)],
        );
        let (f, region) = bump_train(&spec).unwrap();
        assert!(chord_set_on(&f, &region).unwrap().measure() >= int(3));
    }

    #[test]
    fn malformed_trains() {
        let overlap = BumpSpec::new(vec![(int(0), int(2)), (int(1), int(3))], vec![int(1), int(1)]);
        assert!(matches!(bump_train(&overlap), Err(Error::InvalidConfig(_))));
        let mixed = BumpSpec::new(vec![(int(0), int(1)), (int(2), int(3))], vec![int(1), int(-1)]);
        assert!(bump_train(&mixed).is_err());
        let short = BumpSpec::new(vec![(int(0), int(1))], vec![]);
        assert!(bump_train(&short).is_err());
        let bad_peak = BumpSpec::new(vec![(int(0), int(1))], vec![int(1)]).with_peaks(vec![int(1)]);
        assert!(bump_train(&bad_peak).is_err());
    }

    #[test]
    fn pathological_variants() {
        let f1 = pathological_example(1).unwrap();
        let dec = f1.level_decomposition(&int(0));
        assert_eq!(
            dec.equal,
            IntervalSet::from_parts(vec![
                Interval::point(int(0)),
                Interval::point(int(1)),
                Interval::closed(int(2), int(3)).unwrap(),
            ])
        );
        let f2 = pathological_example(2).unwrap();
        let unit = IntervalSet::from(Interval::new(int(0), false, int(1), true).unwrap());
        assert_eq!(interior_chord_set(&f2), unit);
        let above = f2.level_decomposition(&int(0)).above.closure();
        assert_eq!(chord_set_on(&f2, &above).unwrap(), unit);
        assert!(pathological_example(3).is_err());
    }

    #[test]
    fn random_loops() {
        let c = random_loop(0, 2, &int(0), &int(1), &unit_range()).unwrap();
        assert_eq!(c.breakpoints().len(), 2);
        assert_eq!(c.breakpoints()[0].1, c.breakpoints()[1].1);
        let first = random_loop(42, 9, &int(0), &int(1), &unit_range()).unwrap();
        let second = random_loop(42, 9, &int(0), &int(1), &unit_range()).unwrap();
        assert_eq!(first, second);
        for seed in 0..50 {
            let f = random_loop(seed, 12, &int(0), &int(3), &unit_range()).unwrap();
            assert!(f.is_closed_loop());
            assert!(f.breakpoints().len() <= 12);
            assert_eq!((f.start(), f.end()), (&int(0), &int(3)));
            assert!(f.breakpoints().iter().all(|(_, y)| unit_range().contains(y)));
        }
        assert!(random_loop(1, 1, &int(0), &int(1), &unit_range()).is_err());
    }
}
