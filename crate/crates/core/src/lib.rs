//! Exact analysis of horizontal chords of piecewise-linear functions.
//!
//! For a continuous `f` on `[a, b]`, the chord set `D_f` collects every
//! distance `|x - y| > 0` with `f(x) = f(y)`. This crate computes `D_f`
//! exactly (as a finite union of rational intervals) for piecewise-linear
//! `f`, finds chords of prescribed length, builds loops that avoid a
//! given non-divisor length, and checks the lower bound
//! `μ(D_f) >= (b - a) / 3` for loops.

pub mod chords;
pub mod constructions;
pub mod error;
pub mod intervals;
pub mod oracle;
pub mod plfunc;
pub mod rational;
pub mod search;

pub use chords::{
    chord_set, chord_set_on, find_chord_of_length, find_divisor_chord, interior_chord_set,
    verify_measure_bound, ChordWitness, MeasureReport,
};
pub use constructions::{
    bump_train, make_counterexample, pathological_example, random_loop, single_bump, BumpSpec,
    CounterexampleParts,
};
pub use error::{Error, Result};
pub use intervals::{Interval, IntervalSet};
pub use oracle::{grid_chords, oracle_agrees, OracleReport};
pub use plfunc::{LevelDecomposition, PLFunction};
pub use rational::Rational;
pub use search::{minimize, objective, SearchConfig, SearchResult, Variant};
