//! Coefficient pairs with a rational point of prime order, generated from the
//! explicit parametrizations of curves with a point of order 2, 3, 5 and 7.
//!
//! Every generator returns a deduplicated [`CurveSet`]. Candidates produced by
//! a parametrization are always checked against the torsion oracle before
//! they are counted.

mod order2;
mod order3;
pub mod thue;

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::curve::CurvePair;
use crate::error::{Error, Result};

pub use order2::{candidates2, gen2};
pub use order3::{candidates3, gen3};
pub use thue::{gen5, gen7, thue_candidates, ThueFamily};

/// The primes that can occur as orders of rational torsion points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u32", try_from = "u32")]
pub enum TorsionPrime {
    Two,
    Three,
    Five,
    Seven,
}

impl TorsionPrime {
    pub const ALL: [TorsionPrime; 4] = [TorsionPrime::Two, TorsionPrime::Three, TorsionPrime::Five, TorsionPrime::Seven];

    pub fn value(self) -> u32 {
        match self {
            TorsionPrime::Two => 2,
            TorsionPrime::Three => 3,
            TorsionPrime::Five => 5,
            TorsionPrime::Seven => 7,
        }
    }
}

impl From<TorsionPrime> for u32 {
    fn from(p: TorsionPrime) -> u32 {
        p.value()
    }
}

impl TryFrom<u32> for TorsionPrime {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        match p {
            2 => Ok(TorsionPrime::Two),
            3 => Ok(TorsionPrime::Three),
            5 => Ok(TorsionPrime::Five),
            7 => Ok(TorsionPrime::Seven),
            _ => Err(Error::invalid(format!("{p} is not a possible prime torsion order"))),
        }
    }
}

impl fmt::Display for TorsionPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Parameters that reproduce a generated pair under its family's formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `(z1, z2)` for the order-2 and order-3 families.
    Divisor { z1: i64, z2: i64 },
    /// `(p, q, k)` for the order-5 and order-7 families.
    Thue { p: i64, q: i64, k: Rational64 },
    /// The zero-coefficient branches handled in closed form; the value is
    /// the branch parameter (`A` for `(A, 0)`, `t` for `(0, t^2)`, `w` for
    /// `(0, -432 w^6)`).
    ClosedForm(i64),
}

/// A pair `(a, b)` emitted by a family together with its witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyCandidate {
    pub prime: TorsionPrime,
    pub a: i64,
    pub b: i64,
    pub witness: Witness,
}

impl FamilyCandidate {
    pub fn curve(&self) -> Result<CurvePair> {
        CurvePair::from_i64(self.a, self.b)
    }
}

/// A sorted, duplicate-free set of coefficient pairs `(A, B)`.
///
/// Pairs in the census satisfy `|A|, |B| <= M`, so machine integers hold them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSet {
    pairs: Vec<(i64, i64)>,
}

impl CurveSet {
    pub fn from_pairs(mut pairs: Vec<(i64, i64)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        CurveSet { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, a: i64, b: i64) -> bool {
        self.pairs.binary_search(&(a, b)).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn as_slice(&self) -> &[(i64, i64)] {
        &self.pairs
    }

    pub fn filter(&self, keep: impl Fn(i64, i64) -> bool) -> Self {
        CurveSet { pairs: self.pairs.iter().copied().filter(|&(a, b)| keep(a, b)).collect() }
    }

    /// Union of sorted sets by k-way merge.
    pub fn union<'a>(sets: impl IntoIterator<Item = &'a CurveSet>) -> Self {
        let mut merged: Vec<(i64, i64)> = Vec::new();
        for set in sets {
            let mut out = Vec::with_capacity(merged.len() + set.len());
            let (mut i, mut j) = (0, 0);
            let (left, right) = (&merged, &set.pairs);
            while i < left.len() && j < right.len() {
                match left[i].cmp(&right[j]) {
                    std::cmp::Ordering::Less => {
                        out.push(left[i]);
                        i += 1;
                    }
                    std::cmp::Ordering::Greater => {
                        out.push(right[j]);
                        j += 1;
                    }
                    std::cmp::Ordering::Equal => {
                        out.push(left[i]);
                        i += 1;
                        j += 1;
                    }
                }
            }
            out.extend_from_slice(&left[i..]);
            out.extend_from_slice(&right[j..]);
            merged = out;
        }
        CurveSet { pairs: merged }
    }

    pub fn curves(&self) -> impl Iterator<Item = CurvePair> + '_ {
        self.pairs
            .iter()
            .map(|&(a, b)| CurvePair::from_i64(a, b).expect("curve sets only hold nonsingular pairs"))
    }
}

impl FromIterator<(i64, i64)> for CurveSet {
    fn from_iter<I: IntoIterator<Item = (i64, i64)>>(iter: I) -> Self {
        CurveSet::from_pairs(iter.into_iter().collect())
    }
}

/// Generator for one prime.
pub fn generate(prime: TorsionPrime, max: u64) -> Result<CurveSet> {
    match prime {
        TorsionPrime::Two => gen2(max),
        TorsionPrime::Three => gen3(max),
        TorsionPrime::Five => gen5(max),
        TorsionPrime::Seven => gen7(max),
    }
}

/// Bound on `M` so that every intermediate value of the generators fits.
pub const MAX_COEFF_BOUND: u64 = 100_000_000;

pub(crate) fn check_bound(max: u64) -> Result<i64> {
    if max > MAX_COEFF_BOUND {
        return Err(Error::invalid(format!("coefficient bound {max} exceeds {MAX_COEFF_BOUND}")));
    }
    Ok(max as i64)
}
