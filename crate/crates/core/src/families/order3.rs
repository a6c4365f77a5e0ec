//! Order 3: `A = 27 z1^4 + 6 z1 z2`, `B = z2^2 - 27 z1^6` with the point
//! `(3 z1^2, 9 z1^3 + z2)`.

use num_integer::Roots;
use rayon::prelude::*;

use super::{check_bound, CurveSet, FamilyCandidate, TorsionPrime, Witness};
use crate::arith::DivisorSieve;
use crate::curve::{reduced_discriminant_i128, CurvePair, PointOrder, RationalPoint};
use crate::error::{Error, Result};

const CHUNK: i64 = 2048;

/// Every `(A, B)` with `|A|, |B| <= max`, nonzero discriminant and a rational
/// point of order 3.
pub fn gen3(max: u64) -> Result<CurveSet> {
    let m = check_bound(max)?;
    if m == 0 {
        return Ok(CurveSet::default());
    }
    let sieve = DivisorSieve::new(max);
    let chunks: Vec<i64> = (0..=(m - 1) / CHUNK).collect();
    let found: Vec<Result<Vec<FamilyCandidate>>> = chunks
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK + 1;
            let hi = ((c + 1) * CHUNK).min(m);
            let mut local = Vec::new();
            scan(m, &sieve, lo, hi, &mut |cand| local.push(cand));
            local.into_iter().map(verified).collect()
        })
        .collect();
    let mut pairs = Vec::new();
    for chunk in found {
        pairs.extend(chunk?.into_iter().map(|c| (c.a, c.b)));
    }
    for c in zero_a_branch(m) {
        pairs.push((verified(c)?.a, c.b));
    }
    Ok(CurveSet::from_pairs(pairs))
}

/// All verified order-3 candidates with their witnesses.
pub fn candidates3(max: u64) -> Result<Vec<FamilyCandidate>> {
    let m = check_bound(max)?;
    if m == 0 {
        return Ok(Vec::new());
    }
    let sieve = DivisorSieve::new(max);
    let mut raw = Vec::new();
    scan(m, &sieve, 1, m, &mut |c| raw.push(c));
    raw.extend(zero_a_branch(m));
    raw.into_iter().map(verified).collect()
}

/// The point of order 3 that a candidate's witness predicts.
pub fn order3_point(c: &FamilyCandidate) -> RationalPoint {
    match c.witness {
        Witness::Divisor { z1, z2 } => RationalPoint::integral(3 * z1 * z1, 9 * z1 * z1 * z1 + z2),
        Witness::ClosedForm(t) if c.b > 0 => RationalPoint::integral(0, t),
        Witness::ClosedForm(w) => RationalPoint::integral(12 * w * w, 36 * w * w * w),
        Witness::Thue { .. } => unreachable!("order-3 candidates carry divisor witnesses"),
    }
}

fn verified(c: FamilyCandidate) -> Result<FamilyCandidate> {
    let curve = CurvePair::from_i64(c.a, c.b)?;
    let point = order3_point(&c);
    if curve.contains(&point) && curve.point_order(&point)? == PointOrder::Finite(3) {
        Ok(c)
    } else {
        Err(Error::invariant(format!(
            "order-3 witness {:?} does not give a point of order 3 on ({}, {})",
            c.witness, c.a, c.b
        )))
    }
}

/// `A = 0`: exactly `B = t^2` (point `(0, t)`) and `B = -432 w^6`
/// (point `(12 w^2, 36 w^3)`, from `z1 = 2w`, `z2 = -36 w^3`).
fn zero_a_branch(m: i64) -> Vec<FamilyCandidate> {
    let mut out = Vec::new();
    for t in 1..=m.sqrt() {
        out.push(FamilyCandidate { prime: TorsionPrime::Three, a: 0, b: t * t, witness: Witness::ClosedForm(t) });
    }
    let mut w = 1i64;
    while 432 * w.pow(6) <= m {
        out.push(FamilyCandidate { prime: TorsionPrime::Three, a: 0, b: -432 * w.pow(6), witness: Witness::ClosedForm(w) });
        w += 1;
    }
    out
}

/// Candidates with `lo <= |A| <= hi`, `A != 0`.
///
/// Only divisors with `z1^4 <= M` can work: otherwise `z2` is within
/// `|z1|^3 / 6` of `-9 z1^3 / 2`, which forces `|B| >= 5 z1^6 > M`.
fn scan(m: i64, sieve: &DivisorSieve, lo: i64, hi: i64, emit: &mut impl FnMut(FamilyCandidate)) {
    let z1_limit = m.nth_root(4);
    let mut divisors = Vec::new();
    for a_abs in lo..=hi {
        sieve.divisors_into(a_abs as u64, &mut divisors);
        for a in [a_abs, -a_abs] {
            for &d in &divisors {
                let d = d as i64;
                if d > z1_limit {
                    continue;
                }
                for z1 in [d, -d] {
                    let num = a - 27 * z1.pow(4);
                    if num % (6 * z1) != 0 {
                        continue;
                    }
                    let z2 = num / (6 * z1);
                    let b = z2 as i128 * z2 as i128 - 27 * (z1 as i128).pow(6);
                    if b.abs() > m as i128 {
                        continue;
                    }
                    let b = b as i64;
                    if reduced_discriminant_i128(a, b) == 0 {
                        continue;
                    }
                    emit(FamilyCandidate { prime: TorsionPrime::Three, a, b, witness: Witness::Divisor { z1, z2 } });
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        let set = gen3(33).unwrap();
        assert!(set.contains(33, -26));
        let c = candidates3(33).unwrap();
        let hit = c.iter().find(|c| c.a == 33 && c.b == -26).unwrap();
        assert_eq!(hit.witness, Witness::Divisor { z1: 1, z2: 1 });
        assert_eq!(order3_point(hit), RationalPoint::integral(3, 10));

        let set = gen3(10_000).unwrap();
        assert!(set.contains(0, -432));
        let curve = CurvePair::from_i64(0, -432).unwrap();
        assert_eq!(curve.point_order(&RationalPoint::integral(12, 36)).unwrap(), PointOrder::Finite(3));
    }

    #[test]
    fn witnesses_reproduce_pairs() {
        for c in candidates3(2000).unwrap() {
            match c.witness {
                Witness::Divisor { z1, z2 } => {
                    assert_eq!((c.a, c.b), (27 * z1.pow(4) + 6 * z1 * z2, z2 * z2 - 27 * z1.pow(6)));
                }
                Witness::ClosedForm(_) => assert_eq!(c.a, 0),
                other => panic!("unexpected witness {other:?}"),
            }
        }
    }
}
