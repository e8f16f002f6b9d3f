//! Brute-force grid search for chords, used to cross-check [`chord_set`].
//!
//! The oracle only ever proves membership: a grid pair with equal values
//! is a chord. It cannot prove that a length is missing.
//!
//! [`chord_set`]: crate::chords::chord_set

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chords::chord_set;
use crate::plfunc::PLFunction;
use crate::rational::{self, frac, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub grid_denominator: u32,
    /// Sorted, distinct chord lengths seen on the grid.
    #[serde(with = "rational::serde_vec_str")]
    pub found_distances: Vec<Rational>,
    /// One grid pair `(x, y)` per found distance, leftmost first.
    pub witnesses: Vec<GridPair>,
    pub checked_pairs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPair {
    #[serde(with = "rational::serde_str")]
    pub x: Rational,
    #[serde(with = "rational::serde_str")]
    pub y: Rational,
}

/// Checks every pair of grid points `a + k (b - a) / q` for equal values.
pub fn grid_chords(f: &PLFunction, q: u32) -> OracleReport {
    let q = q.max(1);
    let a = f.start();
    let len = f.length();
    let xs: Vec<Rational> = (0..=q).map(|k| a + &len * frac(k.into(), q.into())).collect();
    let ys: Vec<Rational> = xs.iter().map(|x| f.eval_in_domain(x)).collect();

    let mut found: BTreeMap<Rational, GridPair> = BTreeMap::new();
    let mut checked_pairs = 0u64;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            checked_pairs += 1;
            if ys[i] == ys[j] {
                let d = &xs[j] - &xs[i];
                found.entry(d).or_insert_with(|| GridPair { x: xs[i].clone(), y: xs[j].clone() });
            }
        }
    }
    let (found_distances, witnesses) = found.into_iter().unzip();
    OracleReport { grid_denominator: q, found_distances, witnesses, checked_pairs }
}

/// True iff every grid-found length lies in the exact chord set.
pub fn oracle_agrees(f: &PLFunction, q: u32) -> bool {
    let exact = chord_set(f);
    grid_chords(f, q).found_distances.iter().all(|d| exact.contains(d))
}
