//! Rational torsion subgroups via Nagell–Lutz candidates, with element orders
//! capped by Mazur's theorem.

pub mod kernel;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{integer_cubic_roots, square_divisor_roots};
use crate::curve::{CurvePair, PointOrder, RationalPoint};
use crate::error::{Error, Result};

/// One of the fifteen torsion structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TorsionStructure {
    /// `Z/nZ`, `n` in 1..=10 or 12.
    Cyclic(u32),
    /// `Z/2Z x Z/mZ`, `m` in {2, 4, 6, 8}.
    Product(u32),
}

impl TorsionStructure {
    pub const ALL: [TorsionStructure; 15] = [
        TorsionStructure::Cyclic(1),
        TorsionStructure::Cyclic(2),
        TorsionStructure::Cyclic(3),
        TorsionStructure::Cyclic(4),
        TorsionStructure::Cyclic(5),
        TorsionStructure::Cyclic(6),
        TorsionStructure::Cyclic(7),
        TorsionStructure::Cyclic(8),
        TorsionStructure::Cyclic(9),
        TorsionStructure::Cyclic(10),
        TorsionStructure::Cyclic(12),
        TorsionStructure::Product(2),
        TorsionStructure::Product(4),
        TorsionStructure::Product(6),
        TorsionStructure::Product(8),
    ];

    pub fn order(&self) -> u32 {
        match *self {
            TorsionStructure::Cyclic(n) => n,
            TorsionStructure::Product(m) => 2 * m,
        }
    }

    pub fn is_mazur(&self) -> bool {
        Self::ALL.contains(self)
    }

    /// Whether the group has an element of prime order `p`.
    pub fn has_order(&self, p: u32) -> bool {
        self.order() % p == 0
    }

    pub fn is_trivial(&self) -> bool {
        *self == TorsionStructure::Cyclic(1)
    }

    /// Number of elements of each order, identity included.
    fn order_histogram(&self) -> BTreeMap<u32, usize> {
        let (m1, m2) = match *self {
            TorsionStructure::Cyclic(n) => (1, n),
            TorsionStructure::Product(m) => (2, m),
        };
        let mut hist = BTreeMap::new();
        for i in 0..m1 {
            for j in 0..m2 {
                let o = lcm(m1 / gcd(i, m1), m2 / gcd(j, m2));
                *hist.entry(o).or_insert(0) += 1;
            }
        }
        hist
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

impl fmt::Display for TorsionStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TorsionStructure::Cyclic(1) => write!(f, "trivial"),
            TorsionStructure::Cyclic(n) => write!(f, "Z/{n}Z"),
            TorsionStructure::Product(m) => write!(f, "Z/2Z x Z/{m}Z"),
        }
    }
}

/// Classify a torsion subgroup from the orders of its affine points.
///
/// Fails if the point count or the order distribution does not match one of
/// the fifteen structures.
pub fn classify(orders: &[u32]) -> Result<TorsionStructure> {
    let total = orders.len() as u32 + 1;
    if let Some(&bad) = orders.iter().find(|&&o| o == 11 || !(2..=12).contains(&o)) {
        return Err(Error::invariant(format!("torsion element of order {bad}")));
    }
    let two_torsion = orders.iter().filter(|&&o| o == 2).count();
    let max_order = orders.iter().copied().max().unwrap_or(1);
    let structure = if two_torsion == 3 {
        TorsionStructure::Product(max_order)
    } else {
        TorsionStructure::Cyclic(max_order)
    };
    if !structure.is_mazur() || structure.order() != total {
        return Err(Error::invariant(format!(
            "torsion of size {total} with maximal order {max_order} and {two_torsion} points of order 2"
        )));
    }
    let mut observed = BTreeMap::new();
    observed.insert(1, 1usize);
    for &o in orders {
        *observed.entry(o).or_insert(0) += 1;
    }
    if observed != structure.order_histogram() {
        return Err(Error::invariant(format!("order distribution {observed:?} does not match {structure}")));
    }
    Ok(structure)
}

/// The rational torsion subgroup of a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionGroup {
    pub structure: TorsionStructure,
    /// One generator for a cyclic group, two for `Z/2Z x Z/mZ` (order `m` first).
    pub generators: Vec<RationalPoint>,
    /// Every affine torsion point with its order, sorted by coordinates.
    pub points: Vec<(RationalPoint, u32)>,
}

impl TorsionGroup {
    fn assemble(curve: &CurvePair, mut points: Vec<((BigInt, BigInt), u32)>) -> Result<Self> {
        points.sort();
        let orders: Vec<u32> = points.iter().map(|(_, o)| *o).collect();
        let structure = classify(&orders)?;
        let as_point = |(x, y): &(BigInt, BigInt)| RationalPoint::integral(x.clone(), y.clone());
        let max_order = orders.iter().copied().max().unwrap_or(1);
        let mut generators = Vec::new();
        // Prefer small coordinates, positive y first.
        let rank = |((x, y), _): &&((BigInt, BigInt), u32)| (x.abs(), y.abs(), y.is_negative(), x.clone());
        if let Some((first, _)) = points.iter().filter(|(_, o)| *o == max_order).min_by_key(rank) {
            let g = as_point(first);
            if let TorsionStructure::Product(m) = structure {
                let half = curve.scalar_mul(u64::from(m / 2), &g);
                let other = points
                    .iter()
                    .filter(|(c, o)| *o == 2 && as_point(c) != half)
                    .min_by_key(rank)
                    .map(|(c, _)| as_point(c))
                    .ok_or_else(|| Error::invariant("no independent point of order 2"))?;
                generators.push(g);
                generators.push(other);
            } else {
                generators.push(g);
            }
        }
        let points = points.iter().map(|(c, o)| (as_point(c), *o)).collect();
        Ok(TorsionGroup { structure, generators, points })
    }

    /// Re-derive the group with exact arithmetic and check it: every point is
    /// integral and on the curve, the set is closed under addition, orders
    /// match, and the generators span it.
    pub fn validate(&self, curve: &CurvePair) -> Result<()> {
        let mut all: Vec<RationalPoint> = vec![RationalPoint::Infinity];
        for (p, order) in &self.points {
            if !p.is_integral() {
                return Err(Error::invariant(format!("non-integral torsion point {p}")));
            }
            if !curve.contains(p) {
                return Err(Error::invariant(format!("{p} is not on {curve}")));
            }
            if curve.point_order(p)? != PointOrder::Finite(*order) {
                return Err(Error::invariant(format!("{p} does not have order {order}")));
            }
            all.push(p.clone());
        }
        for p in &all {
            for q in &all {
                if !all.contains(&curve.add(p, q)) {
                    return Err(Error::invariant(format!("torsion set on {curve} not closed at {p} + {q}")));
                }
            }
        }
        let mut span: Vec<RationalPoint> = vec![RationalPoint::Infinity];
        for g in &self.generators {
            let mut frontier = span.clone();
            loop {
                let next: Vec<RationalPoint> = frontier.iter().map(|p| curve.add(p, g)).filter(|p| !span.contains(p)).collect();
                if next.is_empty() {
                    break;
                }
                span.extend(next.iter().cloned());
                frontier = next;
            }
        }
        if span.len() != all.len() {
            return Err(Error::invariant(format!(
                "generators span {} points, group has {}",
                span.len(),
                all.len()
            )));
        }
        Ok(())
    }
}

/// Torsion subgroup of `curve`.
///
/// Curves with coefficients within [`kernel::KERNEL_COEFF_LIMIT`] go through
/// the 128-bit kernel; everything else, and any kernel overflow, uses
/// [`torsion_subgroup_exact`].
pub fn torsion_subgroup(curve: &CurvePair) -> Result<TorsionGroup> {
    if let Some((a, b)) = curve.to_i64() {
        if let Some(points) = kernel::torsion_points(a, b) {
            let points = points
                .into_iter()
                .map(|(p, o)| ((BigInt::from(p.x), BigInt::from(p.y)), o))
                .collect();
            return TorsionGroup::assemble(curve, points);
        }
    }
    torsion_subgroup_exact(curve)
}

/// Torsion subgroup using exact rational arithmetic only.
///
/// Candidates are the integral points with `y = 0` or `y^2 | Δ`; each is kept
/// when [`CurvePair::point_order`] finds a finite order.
pub fn torsion_subgroup_exact(curve: &CurvePair) -> Result<TorsionGroup> {
    let (a, b) = (curve.a(), curve.b());
    let mut points = Vec::new();
    for x in integer_cubic_roots(a, b) {
        points.push(((x, BigInt::zero()), 2));
    }
    for y in square_divisor_roots(&curve.discriminant())? {
        let c = b - &y * &y;
        for x in integer_cubic_roots(a, &c) {
            let p = RationalPoint::Affine {
                x: BigRational::from_integer(x.clone()),
                y: BigRational::from_integer(y.clone()),
            };
            if let PointOrder::Finite(n) = curve.point_order(&p)? {
                points.push(((x.clone(), y.clone()), n));
                points.push(((x, -y.clone()), n));
            }
        }
    }
    TorsionGroup::assemble(curve, points)
}

/// Structure only, for machine-size coefficients; the census hot path.
pub fn torsion_structure(a: i64, b: i64) -> Result<TorsionStructure> {
    match kernel::torsion_points(a, b) {
        Some(points) => {
            let orders: Vec<u32> = points.iter().map(|(_, o)| *o).collect();
            classify(&orders)
        }
        None => Ok(torsion_subgroup_exact(&CurvePair::from_i64(a, b)?)?.structure),
    }
}
