//! Continuous piecewise-linear functions on a closed rational interval.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::{Interval, IntervalSet};
use crate::rational::{self, Rational};

/// A continuous function given by its breakpoints; linear in between.
///
/// Breakpoints have strictly increasing `x`. Interior breakpoints lying
/// on the line through their neighbours are dropped on construction, so
/// two functions are equal iff their breakpoint lists are.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FunctionFile", into = "FunctionFile")]
pub struct PLFunction {
    points: Vec<(Rational, Rational)>,
}

#[derive(Serialize, Deserialize)]
struct Breakpoint(
    #[serde(with = "rational::serde_str")] Rational,
    #[serde(with = "rational::serde_str")] Rational,
);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionFile {
    breakpoints: Vec<Breakpoint>,
}

impl TryFrom<FunctionFile> for PLFunction {
    type Error = Error;

    fn try_from(file: FunctionFile) -> Result<Self> {
        PLFunction::new(file.breakpoints.into_iter().map(|Breakpoint(x, y)| (x, y)).collect())
    }
}

impl From<PLFunction> for FunctionFile {
    fn from(f: PLFunction) -> Self {
        FunctionFile { breakpoints: f.points.into_iter().map(|(x, y)| Breakpoint(x, y)).collect() }
    }
}

/// One linear piece `[x0, x1]` of a [`PLFunction`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub x0: Rational,
    pub y0: Rational,
    pub x1: Rational,
    pub y1: Rational,
}

impl Segment {
    pub fn slope(&self) -> Rational {
        (&self.y1 - &self.y0) / (&self.x1 - &self.x0)
    }

    pub fn at(&self, x: &Rational) -> Rational {
        &self.y0 + self.slope() * (x - &self.x0)
    }

    pub fn domain(&self) -> Interval {
        Interval::closed(self.x0.clone(), self.x1.clone()).expect("segment has positive length")
    }

    /// Leftmost zero in the closed sub-range `[lo, hi]` of the segment.
    fn first_root(&self, lo: &Rational, hi: &Rational) -> Option<Rational> {
        let v0 = self.at(lo);
        if v0.is_zero() {
            return Some(lo.clone());
        }
        let v1 = self.at(hi);
        if v1.is_zero() {
            return Some(hi.clone());
        }
        if v0.is_positive() != v1.is_positive() {
            // Linear piece: interpolate the crossing exactly.
            return Some(lo + (hi - lo) * &v0 / (&v0 - &v1));
        }
        None
    }
}

/// The sets where `f` is above, below and equal to a level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDecomposition {
    pub above: IntervalSet,
    pub below: IntervalSet,
    pub equal: IntervalSet,
    #[serde(with = "rational::serde_str")]
    pub level: Rational,
}

fn collinear(p: &(Rational, Rational), q: &(Rational, Rational), r: &(Rational, Rational)) -> bool {
    (&q.1 - &p.1) * (&r.0 - &q.0) == (&r.1 - &q.1) * (&q.0 - &p.0)
}

impl PLFunction {
    /// Validates and canonicalizes breakpoints.
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidFunction(format!(
                "need at least 2 breakpoints, got {}",
                points.len()
            )));
        }
        if let Some(w) = points.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidFunction(format!(
                "x-coordinates must be strictly increasing ({} then {})",
                w[0].0, w[1].0
            )));
        }
        let mut kept: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
        let mut iter = points.into_iter().peekable();
        while let Some(p) = iter.next() {
            if let (Some(prev), Some(next)) = (kept.last(), iter.peek()) {
                if collinear(prev, &p, next) {
                    continue;
                }
            }
            kept.push(p);
        }
        Ok(PLFunction { points: kept })
    }

    pub fn constant(a: Rational, b: Rational, value: Rational) -> Result<Self> {
        PLFunction::new(vec![(a, value.clone()), (b, value)])
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn start(&self) -> &Rational {
        &self.points[0].0
    }

    pub fn end(&self) -> &Rational {
        &self.points[self.points.len() - 1].0
    }

    pub fn length(&self) -> Rational {
        self.end() - self.start()
    }

    pub fn domain(&self) -> Interval {
        Interval::closed(self.start().clone(), self.end().clone()).expect("domain is non-degenerate")
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.points.windows(2).map(|w| Segment {
            x0: w[0].0.clone(),
            y0: w[0].1.clone(),
            x1: w[1].0.clone(),
            y1: w[1].1.clone(),
        })
    }

    pub fn evaluate(&self, x: &Rational) -> Result<Rational> {
        if x < self.start() || x > self.end() {
            return Err(Error::domain(format!(
                "x = {x} lies outside [{}, {}]",
                self.start(),
                self.end()
            )));
        }
        Ok(self.eval_in_domain(x))
    }

    pub(crate) fn eval_in_domain(&self, x: &Rational) -> Rational {
        let idx = self.points.partition_point(|(px, _)| px < x);
        if idx < self.points.len() && self.points[idx].0 == *x {
            return self.points[idx].1.clone();
        }
        let (x0, y0) = &self.points[idx - 1];
        let (x1, y1) = &self.points[idx];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn is_closed_loop(&self) -> bool {
        self.points[0].1 == self.points[self.points.len() - 1].1
    }

    /// The common endpoint value `f(a) = f(b)`.
    pub fn loop_level(&self) -> Result<Rational> {
        let fa = &self.points[0].1;
        let fb = &self.points[self.points.len() - 1].1;
        if fa == fb {
            Ok(fa.clone())
        } else {
            Err(Error::NotALoop { fa: Box::new(fa.clone()), fb: Box::new(fb.clone()) })
        }
    }

    /// `x -> 2 level - f(x)`.
    pub fn reflect_vertical(&self, level: &Rational) -> PLFunction {
        let twice = level + level;
        PLFunction {
            points: self.points.iter().map(|(x, y)| (x.clone(), &twice - y)).collect(),
        }
    }

    /// `x -> f(a + b - x)`.
    pub fn reflect_horizontal(&self) -> PLFunction {
        let sum = self.start() + self.end();
        PLFunction {
            points: self.points.iter().rev().map(|(x, y)| (&sum - x, y.clone())).collect(),
        }
    }

    /// `g(x) = f(x + d) - f(x)` on `[a, b - d]`, for `0 < d < b - a`.
    pub fn shift_difference(&self, d: &Rational) -> Result<PLFunction> {
        if !d.is_positive() || *d >= self.length() {
            return Err(Error::domain(format!(
                "shift d = {d} must lie in (0, {})",
                self.length()
            )));
        }
        let lo = self.start();
        let hi = self.end() - d;
        let mut xs: Vec<Rational> = self
            .points
            .iter()
            .flat_map(|(x, _)| [x.clone(), x - d])
            .filter(|x| x >= lo && *x <= hi)
            .chain([lo.clone(), hi.clone()])
            .collect();
        xs.sort();
        xs.dedup();
        let points = xs
            .into_iter()
            .map(|x| {
                let g = self.eval_in_domain(&(&x + d)) - self.eval_in_domain(&x);
                (x, g)
            })
            .collect();
        PLFunction::new(points)
    }

    /// Pointwise sum of two functions on the same domain.
    pub fn add(&self, other: &PLFunction) -> Result<PLFunction> {
        if self.start() != other.start() || self.end() != other.end() {
            return Err(Error::domain("summands must share a domain"));
        }
        let mut xs: Vec<Rational> =
            self.points.iter().chain(&other.points).map(|(x, _)| x.clone()).collect();
        xs.sort();
        xs.dedup();
        PLFunction::new(
            xs.into_iter()
                .map(|x| {
                    let y = self.eval_in_domain(&x) + other.eval_in_domain(&x);
                    (x, y)
                })
                .collect(),
        )
    }

    /// Leftmost `x` in `[lo, hi]` with `f(x) = 0`.
    pub fn first_root_in(&self, lo: &Rational, hi: &Rational) -> Option<Rational> {
        if lo > hi || lo < self.start() || hi > self.end() {
            return None;
        }
        for seg in self.segments() {
            if seg.x1 < *lo {
                continue;
            }
            if seg.x0 > *hi {
                break;
            }
            let from = if seg.x0 > *lo { &seg.x0 } else { lo };
            let to = if seg.x1 < *hi { &seg.x1 } else { hi };
            if let Some(root) = seg.first_root(from, to) {
                return Some(root);
            }
        }
        None
    }

    /// Exact preimages of `(level, ∞)`, `(-∞, level)` and `{level}`.
    pub fn level_decomposition(&self, level: &Rational) -> LevelDecomposition {
        let mut critical: Vec<Rational> = Vec::with_capacity(2 * self.points.len());
        for seg in self.segments() {
            critical.push(seg.x0.clone());
            let s0 = &seg.y0 - level;
            let s1 = &seg.y1 - level;
            if (s0.is_positive() && s1.is_negative()) || (s0.is_negative() && s1.is_positive()) {
                critical.push(&seg.x0 + (&seg.x1 - &seg.x0) * &s0 / (&s0 - &s1));
            }
        }
        critical.push(self.end().clone());

        let mut above = Vec::new();
        let mut below = Vec::new();
        let mut equal = Vec::new();
        let mut file = |value: Rational, part: Interval| match value.cmp(level) {
            Ordering::Greater => above.push(part),
            Ordering::Less => below.push(part),
            Ordering::Equal => equal.push(part),
        };
        for x in &critical {
            file(self.eval_in_domain(x), Interval::point(x.clone()));
        }
        for w in critical.windows(2) {
            let mid = (&w[0] + &w[1]) / Rational::from_integer(2.into());
            let open = Interval::open(w[0].clone(), w[1].clone()).expect("critical points increase");
            file(self.eval_in_domain(&mid), open);
        }
        LevelDecomposition {
            above: IntervalSet::from_parts(above),
            below: IntervalSet::from_parts(below),
            equal: IntervalSet::from_parts(equal),
            level: level.clone(),
        }
    }
}
