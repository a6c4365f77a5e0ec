//! Nagell–Lutz torsion search in 128-bit integer arithmetic.
//!
//! Torsion points are integral and their multiples are torsion, so every
//! multiple visited while computing an order must be integral with `y = 0` or
//! `y^2 | Δ`. Any multiple that breaks this ends the walk, which keeps every
//! coordinate bounded by the discriminant. Arithmetic is checked; an overflow
//! makes the whole search return `None` and callers fall back to the exact
//! rational path.

use crate::arith::{integer_cubic_roots, square_divisor_roots_u128};
use crate::curve::MAX_TORSION_ORDER;

/// Coefficient magnitude up to which the kernel is attempted.
pub const KERNEL_COEFF_LIMIT: i64 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SmallPoint {
    pub x: i128,
    pub y: i128,
}

enum Step {
    Identity,
    NonIntegral,
    Point(SmallPoint),
}

enum Walk {
    Order(u32),
    NonTorsion,
}

struct SmallCurve {
    a: i128,
    /// |Δ| = 16 |4a^3 + 27b^2|.
    abs_disc: i128,
}

impl SmallCurve {
    fn nagell_lutz_ok(&self, y: i128) -> bool {
        y == 0 || y.checked_mul(y).is_some_and(|y2| self.abs_disc % y2 == 0)
    }

    /// `p + q`; `None` on overflow.
    fn add(&self, p: SmallPoint, q: SmallPoint) -> Option<Step> {
        let (num, den) = if p.x == q.x {
            if p.y != q.y || p.y == 0 {
                return Some(Step::Identity);
            }
            (p.x.checked_mul(p.x)?.checked_mul(3)?.checked_add(self.a)?, p.y.checked_mul(2)?)
        } else {
            (q.y.checked_sub(p.y)?, q.x.checked_sub(p.x)?)
        };
        if num % den != 0 {
            return Some(Step::NonIntegral);
        }
        let slope = num / den;
        let x3 = slope.checked_mul(slope)?.checked_sub(p.x)?.checked_sub(q.x)?;
        let y3 = slope.checked_mul(p.x.checked_sub(x3)?)?.checked_sub(p.y)?;
        Some(Step::Point(SmallPoint { x: x3, y: y3 }))
    }

    fn order(&self, p: SmallPoint) -> Option<Walk> {
        let mut q = p;
        for n in 1..MAX_TORSION_ORDER {
            match self.add(q, p)? {
                Step::Identity => return Some(Walk::Order(n + 1)),
                Step::NonIntegral => return Some(Walk::NonTorsion),
                Step::Point(next) => {
                    if !self.nagell_lutz_ok(next.y) {
                        return Some(Walk::NonTorsion);
                    }
                    q = next;
                }
            }
        }
        Some(Walk::NonTorsion)
    }
}

/// All affine torsion points of `y^2 = x^3 + a x + b` with their orders,
/// sorted by `(x, y)`. `None` if the coefficients are out of range or an
/// intermediate value overflowed.
pub fn torsion_points(a: i64, b: i64) -> Option<Vec<(SmallPoint, u32)>> {
    if a.abs() > KERNEL_COEFF_LIMIT || b.abs() > KERNEL_COEFF_LIMIT {
        return None;
    }
    let (a, b) = (a as i128, b as i128);
    let reduced = 4 * a * a * a + 27 * b * b;
    if reduced == 0 {
        return None;
    }
    let curve = SmallCurve { a, abs_disc: 16 * reduced.abs() };

    let mut out = Vec::new();
    for x in integer_cubic_roots(&a, &b) {
        out.push((SmallPoint { x, y: 0 }, 2));
    }
    for y in square_divisor_roots_u128(curve.abs_disc as u128) {
        let y = y as i128;
        let c = b.checked_sub(y.checked_mul(y)?)?;
        for x in integer_cubic_roots(&a, &c) {
            let p = SmallPoint { x, y };
            if let Walk::Order(n) = curve.order(p)? {
                out.push((p, n));
                out.push((SmallPoint { x, y: -y }, n));
            }
        }
    }
    out.sort_unstable();
    Some(out)
}
