//! Exact integer primitives shared by the curve, family and bounds code.
//!
//! Everything here is integral; floating point only shows up later, in the
//! bound formulas.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Integer types the generic root finders accept (`i128` and `BigInt`).
pub trait ExactInt: Integer + Signed + Roots + Clone + From<i32> + std::fmt::Debug {}

impl<T> ExactInt for T where T: Integer + Signed + Roots + Clone + From<i32> + std::fmt::Debug {}

/// All positive divisors of `|n|` in ascending order.
pub fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    if n.is_zero() {
        return Err(Error::ZeroDivisors);
    }
    let n = n.abs();
    let mut low = Vec::new();
    let mut high = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let q = &n / &d;
            if q != d {
                high.push(q);
            }
            low.push(d.clone());
        }
        d += 1;
    }
    low.extend(high.into_iter().rev());
    Ok(low)
}

/// Integer roots of `x^3 + a*x + b`, ascending and without repetition.
///
/// The cubic is split into the (at most three) integer ranges on which it is
/// monotone, and each range is bisected. No floating point is involved, so the
/// same code serves `i128` in the census hot loop and `BigInt` elsewhere.
pub fn integer_cubic_roots<T: ExactInt>(a: &T, b: &T) -> Vec<T> {
    let eval = |x: &T| -> T { x.clone() * x.clone() * x.clone() + a.clone() * x.clone() + b.clone() };
    let two = T::from(2);
    let three = T::from(3);

    // |x|^3 <= |a||x| + |b| forces |x|^2 <= 2|a| or |x|^3 <= 2|b|.
    let bound = std::cmp::max((two.clone() * a.abs()).sqrt(), (two.clone() * b.abs()).cbrt()) + T::one();

    let mut roots: Vec<T> = Vec::with_capacity(3);
    if !a.is_negative() {
        bisect_monotone(&eval, -bound.clone(), bound, true, &mut roots);
    } else {
        let third = a.abs() / three.clone();
        let floor_c = third.sqrt();
        let ceil_c = if three * floor_c.clone() * floor_c.clone() == a.abs() {
            floor_c.clone()
        } else {
            floor_c.clone() + T::one()
        };
        bisect_monotone(&eval, -bound.clone(), -ceil_c.clone(), true, &mut roots);
        bisect_monotone(&eval, -floor_c.clone(), floor_c, false, &mut roots);
        bisect_monotone(&eval, ceil_c, bound, true, &mut roots);
    }
    roots.sort();
    roots.dedup();
    roots
}

fn bisect_monotone<T: ExactInt, F: Fn(&T) -> T>(f: &F, lo: T, hi: T, increasing: bool, out: &mut Vec<T>) {
    if lo > hi {
        return;
    }
    let (mut lo, mut hi) = (lo, hi);
    let two = T::from(2);
    while lo <= hi {
        let mid = (lo.clone() + hi.clone()).div_floor(&two);
        let v = f(&mid);
        if v.is_zero() {
            out.push(mid);
            return;
        }
        if v.is_positive() == increasing {
            hi = mid - T::one();
        } else {
            lo = mid + T::one();
        }
    }
}

/// `Some(r)` with `r >= 0` and `r^2 == n` when `n` is a perfect square.
pub fn perfect_square_root<T: ExactInt>(n: &T) -> Option<T> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if r.clone() * r.clone() == *n {
        Some(r)
    } else {
        None
    }
}

/// `d(1) + d(2) + ... + d(x)` by the Dirichlet hyperbola method.
pub fn divisor_summatory(x: u64) -> u128 {
    if x == 0 {
        return 0;
    }
    let s = x.sqrt();
    let mut total: u128 = 0;
    for k in 1..=s {
        total += (x / k) as u128;
    }
    2 * total - (s as u128) * (s as u128)
}

/// Prime factorization of a positive 128-bit integer, as `(prime, exponent)`.
pub fn factorize_u128(n: u128) -> BTreeMap<u128, usize> {
    match n {
        0 | 1 => BTreeMap::new(),
        _ if n <= u64::MAX as u128 => num_prime::nt_funcs::factorize64(n as u64)
            .into_iter()
            .map(|(p, e)| (p as u128, e))
            .collect(),
        _ => num_prime::nt_funcs::factorize128(n),
    }
}

/// Every `y >= 1` with `y^2 | n`, ascending. `n` must be positive.
pub fn square_divisor_roots_u128(n: u128) -> Vec<u128> {
    let factors = factorize_u128(n);
    let mut roots = vec![1u128];
    for (p, e) in factors {
        let half = e / 2;
        let current = roots.len();
        let mut pk = 1u128;
        for _ in 0..half {
            pk *= p;
            for i in 0..current {
                roots.push(roots[i] * pk);
            }
        }
    }
    roots.sort_unstable();
    roots
}

/// Every `y >= 1` with `y^2 | |n|`, ascending. `n` must be nonzero.
pub fn square_divisor_roots(n: &BigInt) -> Result<Vec<BigInt>> {
    if n.is_zero() {
        return Err(Error::ZeroDivisors);
    }
    let magnitude: BigUint = n.magnitude().clone();
    if let Ok(small) = u128::try_from(&magnitude) {
        return Ok(square_divisor_roots_u128(small)
            .into_iter()
            .map(BigInt::from)
            .collect());
    }
    let factors = num_prime::nt_funcs::factorize(magnitude);
    let mut roots = vec![BigInt::one()];
    for (p, e) in factors {
        let p = BigInt::from_biguint(Sign::Plus, p);
        let current = roots.len();
        let mut pk = BigInt::one();
        for _ in 0..e / 2 {
            pk *= &p;
            for i in 0..current {
                let r = &roots[i] * &pk;
                roots.push(r);
            }
        }
    }
    roots.sort();
    Ok(roots)
}

/// Smallest-prime-factor table for fast divisor enumeration up to a fixed limit.
pub struct DivisorSieve {
    spf: Vec<u32>,
}

impl DivisorSieve {
    pub fn new(limit: u64) -> Self {
        let limit = limit.max(1) as usize;
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        DivisorSieve { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Positive divisors of `n` (unsorted) appended to `out` after clearing it.
    pub fn divisors_into(&self, n: u64, out: &mut Vec<u64>) {
        assert!(n >= 1 && n <= self.limit(), "{n} outside sieve range");
        out.clear();
        out.push(1);
        let mut rest = n as usize;
        while rest > 1 {
            let p = self.spf[rest] as usize;
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            let current = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p as u64;
                for i in 0..current {
                    out.push(out[i] * pk);
                }
            }
        }
    }
}

/// Primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Largest `r` with `r^k <= n`.
pub fn integer_root(n: u64, k: u32) -> u64 {
    n.nth_root(k)
}
