//! Order 2: `A = z1 - z2^2`, `B = z1 z2`, i.e. `x^3 + Ax + B` has the integer
//! root `-z2`.

use rayon::prelude::*;

use super::{check_bound, CurveSet, FamilyCandidate, TorsionPrime, Witness};
use crate::arith::{integer_cubic_roots, DivisorSieve};
use crate::curve::reduced_discriminant_i128;
use crate::error::Result;

const CHUNK: i64 = 2048;

/// Every `(A, B)` with `|A|, |B| <= max`, nonzero discriminant and a rational
/// point of order 2.
pub fn gen2(max: u64) -> Result<CurveSet> {
    let m = check_bound(max)?;
    if m == 0 {
        return Ok(CurveSet::default());
    }
    let sieve = DivisorSieve::new(max);
    let chunks: Vec<i64> = (0..=(m - 1) / CHUNK).collect();
    let pairs: Vec<(i64, i64)> = chunks
        .into_par_iter()
        .flat_map_iter(|c| {
            let lo = c * CHUNK + 1;
            let hi = ((c + 1) * CHUNK).min(m);
            let mut local = Vec::new();
            scan(m, &sieve, lo, hi, &mut |cand| local.push((cand.a, cand.b)));
            local
        })
        .collect();
    let mut pairs = pairs;
    pairs.extend(zero_b_branch(m).map(|c| (c.a, c.b)));
    Ok(CurveSet::from_pairs(pairs))
}

/// All order-2 candidates with their witnesses (one per admissible divisor).
pub fn candidates2(max: u64) -> Result<Vec<FamilyCandidate>> {
    let m = check_bound(max)?;
    let mut out = Vec::new();
    if m == 0 {
        return Ok(out);
    }
    let sieve = DivisorSieve::new(max);
    scan(m, &sieve, 1, m, &mut |c| out.push(c));
    out.extend(zero_b_branch(m));
    Ok(out)
}

/// `(A, 0)` always has the point `(0, 0)`.
fn zero_b_branch(m: i64) -> impl Iterator<Item = FamilyCandidate> {
    (-m..=m).filter(|&a| a != 0).map(|a| FamilyCandidate {
        prime: TorsionPrime::Two,
        a,
        b: 0,
        witness: Witness::ClosedForm(a),
    })
}

/// Candidates with `lo <= |B| <= hi`, `B != 0`.
fn scan(m: i64, sieve: &DivisorSieve, lo: i64, hi: i64, emit: &mut impl FnMut(FamilyCandidate)) {
    let mut divisors = Vec::new();
    for b_abs in lo..=hi {
        sieve.divisors_into(b_abs as u64, &mut divisors);
        for b in [b_abs, -b_abs] {
            for &d in &divisors {
                for z1 in [d as i64, -(d as i64)] {
                    let z2 = b / z1;
                    let a = z1 - z2 * z2;
                    if a.abs() > m || reduced_discriminant_i128(a, b) == 0 {
                        continue;
                    }
                    let roots = integer_cubic_roots(&(a as i128), &(b as i128));
                    assert!(
                        roots.contains(&(-z2 as i128)),
                        "order-2 witness ({z1},{z2}) does not give a root of x^3 + {a}x + {b}"
                    );
                    emit(FamilyCandidate { prime: TorsionPrime::Two, a, b, witness: Witness::Divisor { z1, z2 } });
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_for_zero_bound() {
        assert!(gen2(0).unwrap().is_empty());
    }

    #[test]
    fn contains_worked_example() {
        let set = gen2(2).unwrap();
        assert!(set.contains(1, 2));
        let c = candidates2(2).unwrap();
        assert!(c
            .iter()
            .any(|c| c.a == 1 && c.b == 2 && c.witness == Witness::Divisor { z1: 2, z2: 1 }));
    }

    #[test]
    fn witnesses_reproduce_pairs() {
        for c in candidates2(60).unwrap() {
            match c.witness {
                Witness::Divisor { z1, z2 } => {
                    assert_eq!((c.a, c.b), (z1 - z2 * z2, z1 * z2));
                }
                Witness::ClosedForm(a) => assert_eq!((c.a, c.b), (a, 0)),
                other => panic!("unexpected witness {other:?}"),
            }
        }
    }

    #[test]
    fn matches_integer_root_definition() {
        let m = 40i64;
        let set = gen2(m as u64).unwrap();
        let mut expected = Vec::new();
        for a in -m..=m {
            for b in -m..=m {
                if reduced_discriminant_i128(a, b) != 0 && !integer_cubic_roots(&(a as i128), &(b as i128)).is_empty() {
                    expected.push((a, b));
                }
            }
        }
        assert_eq!(set.as_slice(), expected.as_slice());
    }

    #[test]
    fn independent_of_worker_count() {
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| gen2(3000).unwrap());
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| gen2(3000).unwrap());
        assert_eq!(one, four);
    }
}
