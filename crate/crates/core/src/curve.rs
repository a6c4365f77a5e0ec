//! Short Weierstrass curves `y^2 = x^3 + a x + b` over the rationals and the
//! chord-tangent group law on their rational points.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `-16 (4 a^3 + 27 b^2)`.
pub fn discriminant(a: &BigInt, b: &BigInt) -> BigInt {
    BigInt::from(-16) * (BigInt::from(4) * a * a * a + BigInt::from(27) * b * b)
}

/// `4 a^3 + 27 b^2` in 128-bit arithmetic; exact whenever `|a|, |b| <= 10^12`.
#[inline]
pub fn reduced_discriminant_i128(a: i64, b: i64) -> i128 {
    let (a, b) = (a as i128, b as i128);
    4 * a * a * a + 27 * b * b
}

/// Height `max(|a|^3, b^2)`.
pub fn duke_height(a: &BigInt, b: &BigInt) -> BigInt {
    let a3 = a.abs().pow(3);
    let b2 = b * b;
    if a3 > b2 {
        a3
    } else {
        b2
    }
}

/// Whether no prime `l` has `l^4 | a` and `l^6 | b` (zero is divisible by everything).
pub fn is_minimal_pair(a: &BigInt, b: &BigInt) -> bool {
    let limit_a = if a.is_zero() { None } else { Some(a.abs().nth_root(4)) };
    let limit_b = if b.is_zero() { None } else { Some(b.abs().nth_root(6)) };
    let limit = match (limit_a, limit_b) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        // (0, 0) is singular; every l divides it.
        (None, None) => return false,
    };
    // A composite witness implies a prime one, so plain integers suffice.
    let mut l = BigInt::from(2);
    while l <= limit {
        let l2 = &l * &l;
        let l4 = &l2 * &l2;
        let l6 = &l4 * &l2;
        if (a % &l4).is_zero() && (b % &l6).is_zero() {
            return false;
        }
        l += 1;
    }
    true
}

/// `is_minimal_pair` on machine integers, for the census filters.
pub fn is_minimal_pair_i64(a: i64, b: i64) -> bool {
    let (ua, ub) = (a.unsigned_abs(), b.unsigned_abs());
    let limit = match (ua, ub) {
        (0, 0) => return false,
        (0, _) => ub.nth_root(6),
        (_, 0) => ua.nth_root(4),
        _ => ua.nth_root(4).min(ub.nth_root(6)),
    };
    (2..=limit).all(|l| !(ua % l.pow(4) == 0 && ub % l.pow(6) == 0))
}

/// A nonsingular curve `y^2 = x^3 + a x + b` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurvePair {
    a: BigInt,
    b: BigInt,
}

impl CurvePair {
    pub fn new(a: BigInt, b: BigInt) -> Result<Self> {
        if discriminant(&a, &b).is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(CurvePair { a, b })
    }

    pub fn from_i64(a: i64, b: i64) -> Result<Self> {
        Self::new(BigInt::from(a), BigInt::from(b))
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn discriminant(&self) -> BigInt {
        discriminant(&self.a, &self.b)
    }

    /// Coefficients as `i64` when both fit.
    pub fn to_i64(&self) -> Option<(i64, i64)> {
        Some((i64::try_from(&self.a).ok()?, i64::try_from(&self.b).ok()?))
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        match p {
            RationalPoint::Infinity => true,
            RationalPoint::Affine { x, y } => {
                let a = BigRational::from_integer(self.a.clone());
                let b = BigRational::from_integer(self.b.clone());
                y * y == x * x * x + a * x + b
            }
        }
    }

    /// `p + q` under the chord-tangent law; both points must lie on the curve.
    pub fn add(&self, p: &RationalPoint, q: &RationalPoint) -> RationalPoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (RationalPoint::Infinity, _) => return q.clone(),
            (_, RationalPoint::Infinity) => return p.clone(),
            (RationalPoint::Affine { x: x1, y: y1 }, RationalPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if y1 != y2 || y1.is_zero() {
                return RationalPoint::Infinity;
            }
            let three = BigRational::from_integer(BigInt::from(3));
            let two = BigRational::from_integer(BigInt::from(2));
            (three * x1 * x1 + BigRational::from_integer(self.a.clone())) / (two * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &slope * &slope - x1 - x2;
        let y3 = slope * (x1 - &x3) - y1;
        RationalPoint::Affine { x: x3, y: y3 }
    }

    /// `[m] p` by double-and-add.
    pub fn scalar_mul(&self, m: u64, p: &RationalPoint) -> RationalPoint {
        let mut result = RationalPoint::Infinity;
        let mut base = p.clone();
        let mut m = m;
        while m > 0 {
            if m & 1 == 1 {
                result = self.add(&result, &base);
            }
            m >>= 1;
            if m > 0 {
                base = self.add(&base, &base);
            }
        }
        result
    }

    /// Order of `p` if it is a torsion point, otherwise `NonTorsion`.
    ///
    /// Multiples are walked up to 12, the largest element order Mazur allows.
    /// A multiple with a non-integral coordinate ends the walk early: every
    /// multiple of a torsion point is torsion, hence integral.
    pub fn point_order(&self, p: &RationalPoint) -> Result<PointOrder> {
        if p.is_infinity() {
            return Ok(PointOrder::Finite(1));
        }
        let mut q = p.clone();
        for n in 1..MAX_TORSION_ORDER {
            if !q.is_integral() {
                return Ok(PointOrder::NonTorsion);
            }
            let next = self.add(&q, p);
            if next.is_infinity() {
                let order = n + 1;
                if order == 11 {
                    return Err(Error::invariant(format!("point {p} of order 11 on {self}")));
                }
                return Ok(PointOrder::Finite(order));
            }
            q = next;
        }
        Ok(PointOrder::NonTorsion)
    }
}

/// Largest order of a rational torsion point.
pub const MAX_TORSION_ORDER: u32 = 12;

impl fmt::Display for CurvePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)
    }
}

/// Order of a rational point as found by [`CurvePair::point_order`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointOrder {
    Finite(u32),
    NonTorsion,
}

/// A rational point: the identity or an affine point with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RationalPoint {
    Infinity,
    Affine { x: BigRational, y: BigRational },
}

impl RationalPoint {
    pub fn affine(x: BigRational, y: BigRational) -> Self {
        RationalPoint::Affine { x, y }
    }

    pub fn integral(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        RationalPoint::Affine {
            x: BigRational::from_integer(x.into()),
            y: BigRational::from_integer(y.into()),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, RationalPoint::Infinity)
    }

    pub fn neg(&self) -> Self {
        match self {
            RationalPoint::Infinity => RationalPoint::Infinity,
            RationalPoint::Affine { x, y } => RationalPoint::Affine { x: x.clone(), y: -y },
        }
    }

    /// Both coordinates have denominator 1 (the identity counts as integral).
    pub fn is_integral(&self) -> bool {
        match self {
            RationalPoint::Infinity => true,
            RationalPoint::Affine { x, y } => x.denom().is_one() && y.denom().is_one(),
        }
    }

    /// Integer coordinates, when the point is affine and integral.
    pub fn integer_coords(&self) -> Option<(BigInt, BigInt)> {
        match self {
            RationalPoint::Affine { x, y } if self.is_integral() => Some((x.numer().clone(), y.numer().clone())),
            _ => None,
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPoint::Infinity => write!(f, "O"),
            RationalPoint::Affine { x, y } => write!(f, "({x},{y})"),
        }
    }
}
