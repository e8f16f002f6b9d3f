//! Exact horizontal-chord analysis.
//!
//! A chord of `f` is a pair `x < y` with `f(x) = f(y)`; its length is
//! `y - x`. [`chord_set`] returns every positive length as a flagged
//! [`IntervalSet`], computed by enumerating pairs of linear pieces. Each
//! pair contributes one interval (or nothing), so the result is exact.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::{Interval, IntervalSet};
use crate::plfunc::{LevelDecomposition, PLFunction};
use crate::rational::{self, positive_integer_quotient, Rational};

/// Certificate that `d` is a chord length: `f(x) = f(y) = level`, `d = y - x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordWitness {
    #[serde(with = "rational::serde_str")]
    pub x: Rational,
    #[serde(with = "rational::serde_str")]
    pub y: Rational,
    #[serde(with = "rational::serde_str")]
    pub d: Rational,
    #[serde(with = "rational::serde_str")]
    pub level: Rational,
}

impl ChordWitness {
    fn at(f: &PLFunction, x: Rational, d: Rational) -> ChordWitness {
        let y = &x + &d;
        let level = f.eval_in_domain(&x);
        ChordWitness { x, y, d, level }
    }

    /// Re-checks the witness against `f` with exact arithmetic.
    pub fn is_valid_for(&self, f: &PLFunction) -> bool {
        self.x < self.y
            && self.d == &self.y - &self.x
            && f.evaluate(&self.x).ok().as_ref() == Some(&self.level)
            && f.evaluate(&self.y).ok().as_ref() == Some(&self.level)
    }
}

/// A linear piece restricted to a flagged sub-interval of the domain.
#[derive(Debug, Clone)]
struct Piece {
    domain: Interval,
    /// `f(x) = base + slope * (x - origin)`
    origin: Rational,
    base: Rational,
    slope: Rational,
}

impl Piece {
    fn value_at(&self, x: &Rational) -> Rational {
        &self.base + &self.slope * (x - &self.origin)
    }

    /// Point where the (non-constant) piece's line reaches `v`.
    fn solve(&self, v: &Rational) -> Rational {
        &self.origin + (v - &self.base) / &self.slope
    }
}

fn pieces_on(f: &PLFunction, region: &IntervalSet) -> Vec<Piece> {
    let mut pieces = Vec::new();
    for part in region.parts() {
        for seg in f.segments() {
            let Some(domain) = seg.domain().intersect(part) else { continue };
            let piece = if domain.is_point() {
                let x = domain.lo().clone();
                Piece { base: seg.at(&x), origin: x, slope: Rational::zero(), domain }
            } else {
                Piece { slope: seg.slope(), origin: seg.x0.clone(), base: seg.y0.clone(), domain }
            };
            pieces.push(piece);
        }
    }
    pieces
}

/// `{y - x : x in p, y in q, f(x) = f(y)}`; `p` need not precede `q`.
fn pair_lengths(p: &Piece, q: &Piece) -> Option<Interval> {
    match (p.slope.is_zero(), q.slope.is_zero()) {
        (true, true) => (p.base == q.base).then(|| p.domain.differences_to(&q.domain)),
        (true, false) => {
            let y = q.solve(&p.base);
            q.domain.contains(&y).then(|| p.domain.affine_image(&-Rational::one(), &y))
        }
        (false, true) => {
            let x = p.solve(&q.base);
            p.domain.contains(&x).then(|| q.domain.affine_image(&Rational::one(), &-x))
        }
        (false, false) => {
            // Partner of x is y(x) = ratio * x + shift; restrict x so that
            // y(x) stays in q's domain, then map x -> y(x) - x.
            let ratio = &p.slope / &q.slope;
            let shift = q.solve(&p.value_at(&Rational::zero()));
            let inverse = Rational::one() / &ratio;
            let admissible = q.domain.affine_image(&inverse, &(-&shift * &inverse));
            let xs = p.domain.intersect(&admissible)?;
            Some(xs.affine_image(&(ratio - Rational::one()), &shift))
        }
    }
}

fn lengths_between(pieces: &[Piece]) -> IntervalSet {
    let mut out = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        for q in &pieces[i..] {
            if let Some(lengths) = pair_lengths(p, q).and_then(|d| d.positive_part()) {
                out.push(lengths);
            }
        }
    }
    IntervalSet::from_parts(out)
}

/// All chord lengths of `f` over its whole domain.
pub fn chord_set(f: &PLFunction) -> IntervalSet {
    lengths_between(&pieces_on(f, &f.domain().into()))
}

/// Chord lengths with both endpoints in `region`, which must lie in the domain.
pub fn chord_set_on(f: &PLFunction, region: &IntervalSet) -> Result<IntervalSet> {
    if !region.is_subset_of(&f.domain().into()) {
        return Err(Error::domain(format!(
            "region {region} is not contained in [{}, {}]",
            f.start(),
            f.end()
        )));
    }
    Ok(lengths_between(&pieces_on(f, region)))
}

/// Chord lengths realized with `a < x < y < b`.
pub fn interior_chord_set(f: &PLFunction) -> IntervalSet {
    let interior = Interval::open(f.start().clone(), f.end().clone()).expect("non-degenerate domain");
    lengths_between(&pieces_on(f, &interior.into()))
}

/// A chord of length `(b - a) / n`, located the way the divisor argument
/// does it: sample `g(x) = f(x + d) - f(x)` on the grid `a + k d`, and
/// either hit a zero there or solve for the root between the first pair
/// of consecutive grid values of opposite sign.
pub fn find_divisor_chord(f: &PLFunction, n: u64) -> Result<ChordWitness> {
    f.loop_level()?;
    if n == 0 {
        return Err(Error::domain("n must be a positive integer"));
    }
    let a = f.start().clone();
    if n == 1 {
        return Ok(ChordWitness::at(f, a, f.length()));
    }
    let d = f.length() / Rational::from_integer(n.into());
    let g = f.shift_difference(&d)?;
    let grid: Vec<Rational> = (0..n).map(|k| &a + &d * Rational::from_integer(k.into())).collect();
    let values: Vec<Rational> = grid.iter().map(|x| g.eval_in_domain(x)).collect();
    for k in 0..grid.len() {
        if values[k].is_zero() {
            return Ok(ChordWitness::at(f, grid[k].clone(), d));
        }
        if k > 0 && values[k].is_positive() != values[k - 1].is_positive() {
            let root = g.first_root_in(&grid[k - 1], &grid[k]).ok_or_else(|| {
                Error::Internal(format!("no root of g between {} and {}", grid[k - 1], grid[k]))
            })?;
            return Ok(ChordWitness::at(f, root, d));
        }
    }
    Err(Error::Internal(format!(
        "g has constant sign on the grid for n = {n}, contradicting g's zero sum"
    )))
}

/// The leftmost chord of length `d`, or `None` as a certificate that
/// `d` is not a chord length.
pub fn find_chord_of_length(f: &PLFunction, d: &Rational) -> Result<Option<ChordWitness>> {
    let len = f.length();
    if !d.is_positive() || *d > len {
        return Err(Error::domain(format!("length d = {d} must lie in (0, {len}]")));
    }
    if *d == len {
        return Ok(f.is_closed_loop().then(|| ChordWitness::at(f, f.start().clone(), len)));
    }
    let g = f.shift_difference(d)?;
    let hi = f.end() - d;
    Ok(g.first_root_in(f.start(), &hi).map(|x| ChordWitness::at(f, x, d.clone())))
}

/// Everything computed while checking `μ(D_f) ≥ (b - a)/3` for a loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub df: IntervalSet,
    #[serde(with = "rational::serde_str")]
    pub mu: Rational,
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
    pub holds: bool,
    pub decomposition: LevelDecomposition,
    pub contributions: Contributions,
}

/// Per-level-set measures: `μ(A)` and `μ(D_f(A))` for the closure of the
/// super-level set, the closure of the sub-level set, and the level set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contributions {
    #[serde(with = "rational::serde_str")]
    pub above_measure: Rational,
    #[serde(with = "rational::serde_str")]
    pub above_chords: Rational,
    #[serde(with = "rational::serde_str")]
    pub below_measure: Rational,
    #[serde(with = "rational::serde_str")]
    pub below_chords: Rational,
    #[serde(with = "rational::serde_str")]
    pub equal_measure: Rational,
    #[serde(with = "rational::serde_str")]
    pub equal_chords: Rational,
}

impl Contributions {
    /// Each step of the lower-bound chain, as `(description, holds)`.
    pub fn chain(&self, mu: &Rational, bound: &Rational) -> Vec<(&'static str, bool)> {
        let best_chords = [&self.above_chords, &self.below_chords, &self.equal_chords]
            .into_iter()
            .max()
            .expect("three entries");
        let best_measure = [&self.above_measure, &self.below_measure, &self.equal_measure]
            .into_iter()
            .max()
            .expect("three entries");
        vec![
            ("mu(D_f) >= max of level-set chord measures", mu >= best_chords),
            ("mu(D_f(cl A_>)) >= mu(A_>)", self.above_chords >= self.above_measure),
            ("mu(D_f(cl A_<)) >= mu(A_<)", self.below_chords >= self.below_measure),
            ("mu(D_f(A_=)) >= mu(A_=)", self.equal_chords >= self.equal_measure),
            ("max level-set measure >= (b-a)/3", best_measure >= bound),
            ("mu(D_f) >= (b-a)/3", mu >= bound),
        ]
    }
}

pub fn verify_measure_bound(f: &PLFunction) -> Result<MeasureReport> {
    let level = f.loop_level()?;
    let df = chord_set(f);
    let mu = df.measure();
    let bound = f.length() / Rational::from_integer(3.into());
    let decomposition = f.level_decomposition(&level);
    let chords_on = |region: &IntervalSet| chord_set_on(f, region).map(|s| s.measure());
    let contributions = Contributions {
        above_measure: decomposition.above.measure(),
        above_chords: chords_on(&decomposition.above.closure())?,
        below_measure: decomposition.below.measure(),
        below_chords: chords_on(&decomposition.below.closure())?,
        equal_measure: decomposition.equal.measure(),
        equal_chords: chords_on(&decomposition.equal)?,
    };
    let holds = contributions.chain(&mu, &bound).iter().all(|(_, ok)| *ok);
    Ok(MeasureReport { df, mu, bound, holds, decomposition, contributions })
}

/// True iff `(b - a) / d` is a positive integer.
pub fn is_divisor_distance(len: &Rational, d: &Rational) -> bool {
    positive_integer_quotient(len, d).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, q};

    fn pl(points: &[(&str, &str)]) -> PLFunction {
        PLFunction::new(points.iter().map(|(x, y)| (q(x), q(y))).collect()).unwrap()
    }

    fn bump() -> PLFunction {
        pl(&[("0", "0"), ("1/2", "1"), ("1", "0")])
    }

    fn half_open(lo: i64, hi: i64) -> IntervalSet {
        Interval::new(int(lo), false, int(hi), true).unwrap().into()
    }

    fn path1() -> PLFunction {
        pl(&[("0", "0"), ("1/2", "1"), ("1", "0"), ("3/2", "-1"), ("2", "0"), ("3", "0")])
    }

    fn path2() -> PLFunction {
        pl(&[("0", "0"), ("1/2", "1"), ("1", "0"), ("2", "0"), ("5/2", "-1"), ("3", "0")])
    }

    #[test]
    fn divisor_chord_examples() {
        let w = find_divisor_chord(&bump(), 1).unwrap();
        assert_eq!((w.x, w.y, w.d, w.level), (int(0), int(1), int(1), int(0)));

        let w = find_divisor_chord(&bump(), 2).unwrap();
        assert_eq!((w.x, w.y, w.d, w.level), (frac(1, 4), frac(3, 4), frac(1, 2), frac(1, 2)));

        // 2x = 2 - 2(x + 1/3) gives x = 1/3 at level 2/3.
        let w = find_divisor_chord(&bump(), 3).unwrap();
        assert_eq!((w.x, w.y, w.d, w.level), (frac(1, 3), frac(2, 3), frac(1, 3), frac(2, 3)));
    }

    #[test]
    fn divisor_chord_requires_loop() {
        let ramp = pl(&[("0", "0"), ("1", "1")]);
        assert!(matches!(find_divisor_chord(&ramp, 2), Err(Error::NotALoop { .. })));
        assert!(matches!(find_divisor_chord(&bump(), 0), Err(Error::Domain(_))));
    }

    #[test]
    fn chord_of_length_examples() {
        let w = find_chord_of_length(&bump(), &int(1)).unwrap().unwrap();
        assert_eq!((w.x, w.y, w.d, w.level), (int(0), int(1), int(1), int(0)));
        let w = find_chord_of_length(&bump(), &frac(1, 3)).unwrap().unwrap();
        assert_eq!(w.x, frac(1, 3));
        assert!(w.is_valid_for(&bump()));
        assert!(find_chord_of_length(&bump(), &frac(3, 2)).is_err());
        assert!(find_chord_of_length(&bump(), &int(0)).is_err());
        let ramp = pl(&[("0", "0"), ("1", "1")]);
        assert_eq!(find_chord_of_length(&ramp, &int(1)).unwrap(), None);
        assert_eq!(find_chord_of_length(&ramp, &frac(1, 2)).unwrap(), None);
    }

    #[test]
    fn leftmost_witness_is_returned() {
        let c = pl(&[("0", "0"), ("1", "0")]);
        let w = find_chord_of_length(&c, &frac(1, 4)).unwrap().unwrap();
        assert_eq!((w.x, w.y), (int(0), frac(1, 4)));
    }

    #[test]
    fn chord_set_of_bump_and_constant() {
        assert_eq!(chord_set(&bump()), half_open(0, 1));
        assert_eq!(chord_set(&pl(&[("0", "4"), ("1", "4")])), half_open(0, 1));
    }

    #[test]
    fn monotone_function_has_no_chords() {
        assert!(chord_set(&pl(&[("0", "0"), ("1/3", "1"), ("1", "5")])).is_empty());
    }

    #[test]
    fn sign_changing_example_full_and_interior() {
        let f = path2();
        let full = chord_set(&f);
        let expected = IntervalSet::from_parts(vec![
            Interval::new(int(0), false, int(2), true).unwrap(),
            Interval::point(int(3)),
        ]);
        assert_eq!(full, expected);
        assert_eq!(full.measure(), int(2));
        assert_eq!(interior_chord_set(&f), half_open(0, 1));
    }

    #[test]
    fn interior_chords_of_bump_and_constant() {
        let open = IntervalSet::from(Interval::open(int(0), int(1)).unwrap());
        assert_eq!(interior_chord_set(&bump()), open);
        assert_eq!(interior_chord_set(&pl(&[("0", "2"), ("1", "2")])), open);
    }

    #[test]
    fn chords_on_level_set_with_isolated_points() {
        let f = path1();
        let equal = f.level_decomposition(&int(0)).equal;
        assert_eq!(chord_set_on(&f, &equal).unwrap(), half_open(0, 3));
    }

    #[test]
    fn chords_on_point_and_outside_region() {
        let single = IntervalSet::from(Interval::point(frac(1, 3)));
        assert!(chord_set_on(&bump(), &single).unwrap().is_empty());
        let outside = IntervalSet::from(Interval::closed(int(0), int(2)).unwrap());
        assert!(matches!(chord_set_on(&bump(), &outside), Err(Error::Domain(_))));
    }

    #[test]
    fn open_region_excludes_boundary_chords() {
        // On [0,1/2) the bump is injective, and on the two disjoint halves
        // (0,1/4] ∪ [3/4,1) the extreme length 1 is never reached.
        let region = IntervalSet::from_parts(vec![
            Interval::new(int(0), false, frac(1, 4), true).unwrap(),
            Interval::new(frac(3, 4), true, int(1), false).unwrap(),
        ]);
        let expected = Interval::new(frac(1, 2), true, int(1), false).unwrap();
        assert_eq!(chord_set_on(&bump(), &region).unwrap(), expected.into());
    }

    #[test]
    fn two_bump_superset() {
        let f = pl(&[("0", "0"), ("1/2", "2"), ("1", "0"), ("2", "0"), ("5/2", "1"), ("3", "0")]);
        let a = IntervalSet::from_parts(vec![
            Interval::closed(int(0), int(1)).unwrap(),
            Interval::closed(int(2), int(3)).unwrap(),
        ]);
        let d = chord_set_on(&f, &a).unwrap();
        assert!(IntervalSet::from(Interval::closed(int(2), int(3)).unwrap()).is_subset_of(&d));
    }

    #[test]
    fn measure_report_examples() {
        let r = verify_measure_bound(&bump()).unwrap();
        assert_eq!(r.mu, int(1));
        assert_eq!(r.bound, frac(1, 3));
        assert!(r.holds);

        let r = verify_measure_bound(&path2()).unwrap();
        assert_eq!(r.mu, int(2));
        assert_eq!(r.bound, int(1));
        assert!(r.holds);
        assert_eq!(r.contributions.above_chords, int(1));
        assert_eq!(r.contributions.below_chords, int(1));
        // A_= = {0} ∪ [1,2] ∪ {3}: lengths (0,2] ∪ {3}.
        assert_eq!(r.contributions.equal_chords, int(2));

        let ramp = pl(&[("0", "0"), ("1", "1")]);
        assert!(matches!(verify_measure_bound(&ramp), Err(Error::NotALoop { .. })));
    }

    #[test]
    fn witness_json() {
        let w = find_divisor_chord(&bump(), 2).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, r#"{"x":"1/4","y":"3/4","d":"1/2","level":"1/2"}"#);
    }
}
