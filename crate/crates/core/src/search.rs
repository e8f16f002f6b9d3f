//! Randomized descent on `μ(D_f)` over piecewise-linear loops.
//!
//! Each restart starts from the configured initial function (or a fresh
//! random loop), then repeatedly nudges one breakpoint and keeps the move
//! only if the exact objective strictly drops. Restarts are independent:
//! restart `i` draws from ChaCha stream `i` of the configured seed, so
//! the result does not depend on how restarts are scheduled.
//!
//! The search produces upper-bound evidence about the smallest achievable
//! measure. It proves nothing about the infimum.

use std::fmt::Write as _;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chords::{chord_set, interior_chord_set};
use crate::constructions::random_loop_with;
use crate::error::{Error, Result};
use crate::intervals::Interval;
use crate::plfunc::PLFunction;
use crate::rational::{self, frac, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Chords with `a <= x < y <= b`.
    Full,
    /// Chords with `a < x < y < b`.
    Interior,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domain {
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub breakpoint_count: usize,
    pub restarts: usize,
    /// Zero evaluates the starting functions only.
    pub steps_per_restart: usize,
    pub seed: u64,
    pub variant: Variant,
    pub domain: Domain,
    /// Moves are multiples of `1 / perturbation_denominator` in y and of
    /// `(b - a) / perturbation_denominator` in x.
    pub perturbation_denominator: u32,
    /// Also move interior breakpoints horizontally.
    pub perturb_x: bool,
    pub initial: Option<PLFunction>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            breakpoint_count: 8,
            restarts: 4,
            steps_per_restart: 200,
            seed: 0,
            variant: Variant::Full,
            domain: Domain { a: int(0), b: int(3) },
            perturbation_denominator: 16,
            perturb_x: true,
            initial: None,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.breakpoint_count < 3 {
            return bad(format!("breakpoint_count must be at least 3, got {}", self.breakpoint_count));
        }
        if self.restarts < 1 {
            return bad("restarts must be at least 1".into());
        }
        if self.perturbation_denominator < 2 {
            return bad("perturbation_denominator must be at least 2".into());
        }
        if self.domain.a >= self.domain.b {
            return bad(format!("empty domain [{}, {}]", self.domain.a, self.domain.b));
        }
        if let Some(f) = &self.initial {
            if f.start() != &self.domain.a || f.end() != &self.domain.b {
                return bad(format!(
                    "initial function lives on [{}, {}], not [{}, {}]",
                    f.start(),
                    f.end(),
                    self.domain.a,
                    self.domain.b
                ));
            }
            f.loop_level()?;
        }
        Ok(())
    }

    fn bound(&self) -> Rational {
        (&self.domain.b - &self.domain.a) / int(3)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub restart: usize,
    pub step: usize,
    #[serde(with = "rational::serde_str")]
    pub objective: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best: PLFunction,
    #[serde(with = "rational::serde_str")]
    pub objective: Rational,
    /// `(b - a) / 3`.
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
    pub best_restart: usize,
    /// Starting objective of every restart, then every accepted move.
    pub trace: Vec<TraceEntry>,
    pub config: SearchConfig,
}

impl SearchResult {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("restart,step,objective\n");
        for e in &self.trace {
            writeln!(out, "{},{},{}", e.restart, e.step, e.objective).expect("writing to a String");
        }
        out
    }
}

/// Exact measure of the chord set selected by `variant`.
pub fn objective(f: &PLFunction, variant: Variant) -> Result<Rational> {
    f.loop_level()?;
    Ok(match variant {
        Variant::Full => chord_set(f).measure(),
        Variant::Interior => interior_chord_set(f).measure(),
    })
}

struct RestartOutcome {
    best: PLFunction,
    objective: Rational,
    trace: Vec<TraceEntry>,
}

/// Proposes a neighbour of `points`; `None` when the drawn move is illegal.
fn propose<R: Rng>(
    rng: &mut R,
    points: &[(Rational, Rational)],
    config: &SearchConfig,
) -> Option<Vec<(Rational, Rational)>> {
    let n = points.len();
    let denom = i64::from(config.perturbation_denominator);
    let idx = rng.gen_range(0..n);
    let mut next = points.to_vec();
    if config.perturb_x && idx > 0 && idx < n - 1 && rng.gen_bool(0.5) {
        let Domain { a, b } = &config.domain;
        let x = a + (b - a) * frac(rng.gen_range(1..denom), denom);
        if x <= next[idx - 1].0 || x >= next[idx + 1].0 {
            return None;
        }
        next[idx].0 = x;
    } else {
        let magnitude = rng.gen_range(1..=4);
        let delta = frac(if rng.gen_bool(0.5) { magnitude } else { -magnitude }, denom);
        if idx == 0 || idx == n - 1 {
            // Both endpoints move together so the loop stays closed.
            next[0].1 += &delta;
            next[n - 1].1 += &delta;
        } else {
            next[idx].1 += delta;
        }
    }
    Some(next)
}

fn run_restart(config: &SearchConfig, restart: usize) -> Result<RestartOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(restart as u64);
    let start = match &config.initial {
        Some(f) => f.clone(),
        None => {
            let range = Interval::closed(int(-1), int(1)).expect("non-empty");
            let Domain { a, b } = &config.domain;
            random_loop_with(&mut rng, config.breakpoint_count, a, b, &range)?
        }
    };
    let mut points = start.breakpoints().to_vec();
    let mut best = start;
    let mut best_value = objective(&best, config.variant)?;
    let mut trace = vec![TraceEntry { restart, step: 0, objective: best_value.clone() }];

    for step in 1..=config.steps_per_restart {
        let Some(candidate) = propose(&mut rng, &points, config) else { continue };
        let f = PLFunction::new(candidate.clone())?;
        let value = objective(&f, config.variant)?;
        if value < best_value {
            points = candidate;
            best = f;
            best_value = value;
            trace.push(TraceEntry { restart, step, objective: best_value.clone() });
        }
    }
    Ok(RestartOutcome { best, objective: best_value, trace })
}

/// Runs every restart (concurrently) and keeps the lowest objective,
/// breaking ties by restart index.
pub fn minimize(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let outcomes = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(config, r))
        .collect::<Result<Vec<_>>>()?;

    let bound = config.bound();
    let mut best_restart = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.objective < outcomes[best_restart].objective {
            best_restart = i;
        }
    }
    let trace = outcomes.iter().flat_map(|o| o.trace.iter().cloned()).collect();
    let winner = &outcomes[best_restart];
    if config.variant == Variant::Full && winner.objective < bound {
        return Err(Error::Internal(format!(
            "objective {} fell below (b - a)/3 = {bound}",
            winner.objective
        )));
    }
    debug_assert!(!winner.objective.is_negative());
    Ok(SearchResult {
        best: winner.best.clone(),
        objective: winner.objective.clone(),
        bound,
        best_restart,
        trace,
        config: config.clone(),
    })
}
