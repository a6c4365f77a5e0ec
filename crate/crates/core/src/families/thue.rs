//! Orders 5 and 7: `A = -27 k^4 F(p, q)`, `B = 54 k^6 G(p, q)` for binary
//! forms `F`, `G` and integer `(p, q)`.
//!
//! The enumeration region is a box `|p|, |q| <= R`. Because `F` and `G` have
//! no common real zero, `m* = min_{|v| = 1} max(|F(v)|, |G(v)|)` is positive,
//! and for `|v| = r >= 1` we get `max(|A|, |B|) >= c r^d m*` with
//! `c = min(27 k^4, 54 k^6)` and `d = min(deg F, deg G)`. The box therefore
//! needs `R = ceil((M / (c m*))^(1/d))`. `m*` comes from dense angular
//! sampling with a 10% margin, and every generator run re-scans a box of
//! twice that width and insists that nothing new appears.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{check_bound, CurveSet, FamilyCandidate, TorsionPrime, Witness};
use crate::curve::discriminant;
use crate::error::{Error, Result};
use crate::torsion::torsion_structure;

const ANGULAR_SAMPLES: usize = 1_000_000;
const SAMPLING_SLACK: f64 = 0.9;

/// `sum_i c_i p^i q^(d - i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    coeffs: Vec<i64>,
}

impl BinaryForm {
    /// Coefficients by ascending power of `p`.
    pub fn new(coeffs: Vec<i64>) -> Self {
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BinaryForm { coeffs: out }
    }

    /// Number of nonzero coefficients.
    pub fn nonzero_terms(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    pub fn eval(&self, p: &BigInt, q: &BigInt) -> BigInt {
        let d = self.degree();
        let mut total = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c != 0 {
                total += BigInt::from(*c) * p.pow(i as u32) * q.pow(d - i as u32);
            }
        }
        total
    }

    pub fn eval_f64(&self, p: f64, q: f64) -> f64 {
        let d = self.degree() as i32;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c as f64 * p.powi(i as i32) * q.powi(d - i as i32))
            .sum()
    }

    /// Coefficients of the dehomogenization `t -> F(1, t)`, ascending in `t`.
    fn at_p_one(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().map(|&c| BigInt::from(c)).collect()
    }
}

/// Resultant of two polynomials (coefficients ascending) via the Sylvester
/// matrix and fraction-free elimination.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            mat[n + row][row + j] = c.clone();
        }
    }
    bareiss_determinant(mat)
}

fn bareiss_determinant(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let size = mat.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = (&mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j]) / &prev;
                mat[i][j] = v;
            }
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[size - 1][size - 1]
}

/// A family `A = -27 k^4 F(p, q)`, `B = 54 k^6 G(p, q)`.
#[derive(Debug)]
pub struct ThueFamily {
    pub prime: TorsionPrime,
    pub a_form: BinaryForm,
    pub b_form: BinaryForm,
    pub ks: Vec<Rational64>,
    min_on_circle: OnceLock<f64>,
}

impl ThueFamily {
    fn new(prime: TorsionPrime, a_form: BinaryForm, b_form: BinaryForm, ks: Vec<Rational64>) -> Self {
        ThueFamily { prime, a_form, b_form, ks, min_on_circle: OnceLock::new() }
    }

    /// `A = -27 (q^4 - 12 q^3 p + 14 q^2 p^2 + 12 p^3 q + p^4)`,
    /// `B = 54 (p^2 + q^2)(q^4 - 18 q^3 p + 74 q^2 p^2 + 18 p^3 q + p^4)`.
    pub fn order5() -> &'static ThueFamily {
        static FAMILY: OnceLock<ThueFamily> = OnceLock::new();
        FAMILY.get_or_init(|| {
            let f = BinaryForm::new(vec![1, -12, 14, 12, 1]);
            let g = BinaryForm::new(vec![1, 0, 1]).mul(&BinaryForm::new(vec![1, -18, 74, 18, 1]));
            ThueFamily::new(TorsionPrime::Five, f, g, vec![Rational64::one()])
        })
    }

    /// The degree-8 and degree-12 forms, for `k = 1` and `k = 1/3`.
    pub fn order7() -> &'static ThueFamily {
        static FAMILY: OnceLock<ThueFamily> = OnceLock::new();
        FAMILY.get_or_init(|| {
            let f = BinaryForm::new(vec![1, -1, 1]).mul(&BinaryForm::new(vec![1, 5, -10, -15, 30, -11, 1]));
            let g = BinaryForm::new(vec![1, 6, -15, -46, 174, -222, 273, -486, 570, -354, 117, -18, 1]);
            ThueFamily::new(TorsionPrime::Seven, f, g, vec![Rational64::one(), Rational64::new(1, 3)])
        })
    }

    pub fn for_prime(prime: TorsionPrime) -> Option<&'static ThueFamily> {
        match prime {
            TorsionPrime::Five => Some(Self::order5()),
            TorsionPrime::Seven => Some(Self::order7()),
            _ => None,
        }
    }

    /// `(A, B)` for the given parameters, when both are integers.
    pub fn pair(&self, p: i64, q: i64, k: Rational64) -> Option<(BigInt, BigInt)> {
        let (p, q) = (BigInt::from(p), BigInt::from(q));
        let k = BigRational::new(BigInt::from(*k.numer()), BigInt::from(*k.denom()));
        let k2 = &k * &k;
        let k4 = &k2 * &k2;
        let k6 = &k4 * &k2;
        let a = BigRational::from_integer(BigInt::from(-27) * self.a_form.eval(&p, &q)) * k4;
        let b = BigRational::from_integer(BigInt::from(54) * self.b_form.eval(&p, &q)) * k6;
        if a.is_integer() && b.is_integer() {
            Some((a.to_integer(), b.to_integer()))
        } else {
            None
        }
    }

    /// Resultant of `F(1, t)` and `G(1, t)`; nonzero iff the forms share no
    /// projective zero.
    pub fn resultant(&self) -> BigInt {
        resultant(&self.a_form.at_p_one(), &self.b_form.at_p_one())
    }

    /// Sampled `min_{|v| = 1} max(|F(v)|, |G(v)|)`, already reduced by the margin.
    pub fn min_on_circle(&self) -> f64 {
        *self.min_on_circle.get_or_init(|| {
            let mut best = f64::INFINITY;
            // Even degrees: F(-v) = F(v), so half a turn suffices.
            for i in 0..ANGULAR_SAMPLES {
                let theta = std::f64::consts::PI * i as f64 / ANGULAR_SAMPLES as f64;
                let (s, c) = theta.sin_cos();
                let v = self.a_form.eval_f64(c, s).abs().max(self.b_form.eval_f64(c, s).abs());
                best = best.min(v);
            }
            best * SAMPLING_SLACK
        })
    }

    /// Box half-width that contains every `(p, q)` with `|A|, |B| <= max` for
    /// this `k`.
    pub fn half_width(&self, k: Rational64, max: u64) -> i64 {
        let kf = k.to_f64().expect("small rational");
        let scale = (27.0 * kf.powi(4)).min(54.0 * kf.powi(6));
        let degree = self.a_form.degree().min(self.b_form.degree()) as f64;
        let r = (max as f64 / (scale * self.min_on_circle())).powf(1.0 / degree).ceil();
        (r as i64).max(1)
    }
}

/// Verified candidates of a family with the box half-widths multiplied by
/// `box_scale`. `(p, q)` and `(-p, -q)` give the same pair, so only
/// `q > 0` or `q = 0, p > 0` is visited.
pub fn thue_candidates(family: &ThueFamily, max: u64, box_scale: i64) -> Result<Vec<FamilyCandidate>> {
    let m = BigInt::from(check_bound(max)?);
    if family.resultant().is_zero() {
        return Err(Error::invariant(format!("order-{} forms share a zero", family.prime)));
    }
    let mut out = Vec::new();
    for &k in &family.ks {
        let r = family.half_width(k, max) * box_scale;
        for q in 0..=r {
            for p in -r..=r {
                if q == 0 && p <= 0 {
                    continue;
                }
                let Some((a, b)) = family.pair(p, q, k) else { continue };
                if a.abs() > m || b.abs() > m || discriminant(&a, &b).is_zero() {
                    continue;
                }
                let (a, b) = (a.to_i64().expect("bounded"), b.to_i64().expect("bounded"));
                if torsion_structure(a, b)?.has_order(family.prime.value()) {
                    out.push(FamilyCandidate { prime: family.prime, a, b, witness: Witness::Thue { p, q, k } });
                }
            }
        }
    }
    Ok(out)
}

/// Generate with an explicit box scale (1 is the safe box).
pub fn gen_thue_scaled(family: &ThueFamily, max: u64, box_scale: i64) -> Result<CurveSet> {
    Ok(thue_candidates(family, max, box_scale)?.iter().map(|c| (c.a, c.b)).collect())
}

fn gen_thue(family: &ThueFamily, max: u64) -> Result<CurveSet> {
    let safe = gen_thue_scaled(family, max, 1)?;
    let extended = gen_thue_scaled(family, max, 2)?;
    if extended != safe {
        let missing: Vec<(i64, i64)> = extended.iter().filter(|&(a, b)| !safe.contains(a, b)).collect();
        return Err(Error::invariant(format!(
            "order-{} box for M = {max} misses {missing:?}",
            family.prime
        )));
    }
    Ok(safe)
}

/// Every `(A, B)` with `|A|, |B| <= max` from the order-5 family that carries
/// a verified point of order 5.
pub fn gen5(max: u64) -> Result<CurveSet> {
    gen_thue(ThueFamily::order5(), max)
}

/// As [`gen5`] for order 7, both `k = 1` and `k = 1/3`.
pub fn gen7(max: u64) -> Result<CurveSet> {
    gen_thue(ThueFamily::order7(), max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurvePair;
    use crate::torsion::torsion_subgroup;

    #[test]
    fn order5_worked_examples() {
        let fam = ThueFamily::order5();
        let (a, b) = fam.pair(1, 1, Rational64::one()).unwrap();
        assert_eq!((a.clone(), b.clone()), (BigInt::from(-432), BigInt::from(8208)));
        let g = torsion_subgroup(&CurvePair::new(a, b).unwrap()).unwrap();
        assert!(g.structure.has_order(5));

        let (a, b) = fam.pair(1, 0, Rational64::one()).unwrap();
        assert_eq!((a.clone(), b.clone()), (BigInt::from(-27), BigInt::from(54)));
        assert!(discriminant(&a, &b).is_zero());
    }

    #[test]
    fn order7_origin_is_singular() {
        let fam = ThueFamily::order7();
        for &k in &fam.ks {
            let (a, b) = fam.pair(0, 0, k).unwrap();
            assert!(a.is_zero() && b.is_zero());
        }
    }

    #[test]
    fn forms_have_expected_shape() {
        let f5 = ThueFamily::order5();
        assert_eq!((f5.a_form.degree(), f5.b_form.degree()), (4, 6));
        assert_eq!(f5.a_form.nonzero_terms(), 5);
        let f7 = ThueFamily::order7();
        assert_eq!((f7.a_form.degree(), f7.b_form.degree()), (8, 12));
        assert_eq!(f7.b_form.nonzero_terms(), 13);
    }

    #[test]
    fn resultants_are_nonzero() {
        for fam in [ThueFamily::order5(), ThueFamily::order7()] {
            assert!(!fam.resultant().is_zero(), "order {}", fam.prime);
        }
        // Sanity check of the resultant itself: (t - 1)(t - 2) and (t - 2)(t + 5) share t = 2.
        let f = [2, -3, 1].map(BigInt::from);
        let g = [-10, 3, 1].map(BigInt::from);
        assert!(resultant(&f, &g).is_zero());
        // Res(t - a, t - b) = b - a up to sign convention: here (t - 1, t - 4) gives 3.
        let r = resultant(&[-1, 1].map(BigInt::from), &[-4, 1].map(BigInt::from));
        assert_eq!(r.abs(), BigInt::from(3));
    }

    #[test]
    fn antipodal_parameters_agree() {
        for fam in [ThueFamily::order5(), ThueFamily::order7()] {
            for &k in &fam.ks {
                for p in -6..=6 {
                    for q in -6..=6 {
                        assert_eq!(fam.pair(p, q, k), fam.pair(-p, -q, k));
                    }
                }
            }
        }
    }

    #[test]
    fn box_lower_bound_holds_on_lattice() {
        // Outside the box every lattice point must exceed the bound.
        for fam in [ThueFamily::order5(), ThueFamily::order7()] {
            for &k in &fam.ks {
                let max = 10_000u64;
                let r = fam.half_width(k, max);
                let kf = k.to_f64().unwrap();
                for p in -3 * r..=3 * r {
                    for q in -3 * r..=3 * r {
                        if p.abs() <= r && q.abs() <= r {
                            continue;
                        }
                        let a = 27.0 * kf.powi(4) * fam.a_form.eval_f64(p as f64, q as f64).abs();
                        let b = 54.0 * kf.powi(6) * fam.b_form.eval_f64(p as f64, q as f64).abs();
                        assert!(a.max(b) > max as f64, "order {} k={k} ({p},{q})", fam.prime);
                    }
                }
            }
        }
    }
}
