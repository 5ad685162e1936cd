//! Finite unions of half-open subintervals of `[0, 1)` with exact measure.
//!
//! The normal form is a strictly increasing list of disjoint, non-touching
//! intervals `[a_1, b_1), ..., [a_k, b_k)` with `0 <= a_1 < b_1 < a_2 < ... <= 1`,
//! so two sets are equal exactly when their interval lists are equal.

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("interval [{0}, {1}) leaves [0, 1]")]
    OutOfRange(Rational, Rational),
    #[error("interval [{0}, {1}) has a > b")]
    Reversed(Rational, Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct IntervalSet {
    intervals: Vec<(Rational, Rational)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn full() -> Self {
        IntervalSet {
            intervals: vec![(Rational::zero(), Rational::one())],
        }
    }

    /// Builds a normalized set from arbitrary pairs. Empty pairs `a == b` are
    /// dropped; overlapping or touching pairs are merged.
    pub fn make<I>(raw: I) -> Result<Self, IntervalError>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let zero = Rational::zero();
        let one = Rational::one();
        let mut pairs = Vec::new();
        for (a, b) in raw {
            if a > b {
                return Err(IntervalError::Reversed(a, b));
            }
            if a < zero || b > one {
                return Err(IntervalError::OutOfRange(a, b));
            }
            if a < b {
                pairs.push((a, b));
            }
        }
        Ok(Self::from_valid(pairs))
    }

    /// `[a, b)`; panics on invalid input. Used by constructions that maintain
    /// the bounds themselves.
    pub fn interval(a: Rational, b: Rational) -> Self {
        Self::make([(a, b)]).expect("interval within [0, 1]")
    }

    fn from_valid(mut pairs: Vec<(Rational, Rational)>) -> Self {
        pairs.sort();
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        self.intervals.iter().any(|(a, b)| a <= t && t < b)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let (xs, ys) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < xs.len() && j < ys.len() {
            let lo = Rational::max_of(&xs[i].0, &ys[j].0);
            let hi = Rational::min_of(&xs[i].1, &ys[j].1);
            if lo < hi {
                out.push((lo, hi));
            }
            if xs[i].1 < ys[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Pieces of two normalized sets cannot touch after intersection.
        IntervalSet { intervals: out }
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut pairs = self.intervals.clone();
        pairs.extend(other.intervals.iter().cloned());
        Self::from_valid(pairs)
    }

    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::new();
        let mut cursor = Rational::zero();
        for (a, b) in &self.intervals {
            if &cursor < a {
                out.push((cursor.clone(), a.clone()));
            }
            cursor = b.clone();
        }
        if cursor < Rational::one() {
            out.push((cursor, Rational::one()));
        }
        IntervalSet { intervals: out }
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        self.intersect(&other.complement())
    }

    /// All interval endpoints, sorted and deduplicated.
    pub fn endpoints(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self
            .intervals
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<(Rational, Rational)>::deserialize(d)?;
        IntervalSet::make(raw).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.intervals.iter().map(|(a, b)| format!("[{a}, {b})")).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}
