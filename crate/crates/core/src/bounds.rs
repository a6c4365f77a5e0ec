//! Theoretical upper bounds for the torsion counts and the counts-versus-bounds
//! comparison.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{integer_root, primes_up_to};
use crate::census::CensusReport;
use crate::error::{Error, Result};
use crate::families::TorsionPrime;

/// Tolerance for the prime zeta values carried in reports.
pub const ZETA_TOLERANCE: f64 = 1e-10;

/// Largest prime cutoff `prime_zeta` will sieve to.
const ZETA_MAX_CUTOFF: u64 = 200_000_000;

pub const PRODUCT_FOOTNOTE: &str = "the isomorphism-class lower bound uses the product P(4)P(6) as printed; \
a union argument over l^4 | A and l^6 | B would suggest a different combination";

/// `(r s)^{1/2} h^{2/r} (1 + (ln h)^{1/r})`, the solution-count bound for a
/// Thue inequality `|F(x, y)| <= h` with `F` of degree `r` and `s` nonzero
/// coefficients.
pub fn schmidt_bound(r: u32, s: u32, h: f64) -> Result<f64> {
    if r <= 3 {
        return Err(Error::invalid(format!("degree {r} must exceed 3")));
    }
    if s == 0 {
        return Err(Error::invalid("a form needs at least one nonzero coefficient"));
    }
    if h.is_nan() || h <= 1.0 || h.is_infinite() {
        return Err(Error::invalid(format!("height {h} must be a finite real > 1")));
    }
    let r = f64::from(r);
    Ok((r * f64::from(s)).sqrt() * h.powf(2.0 / r) * (1.0 + h.ln().powf(1.0 / r)))
}

/// Upper bound for `|T_p(M)|`.
pub fn torsion_bound(p: TorsionPrime, max: u64) -> Result<f64> {
    if max < 2 {
        return Err(Error::invalid(format!("bounds need M >= 2, got {max}")));
    }
    let m = max as f64;
    let ln = m.ln();
    Ok(match p {
        TorsionPrime::Two | TorsionPrime::Three => 4.0 * m * ln,
        TorsionPrime::Five => 4.0 * m.sqrt() * (1.0 + ln.powf(0.25)),
        TorsionPrime::Seven => 24.0 * m.powf(1.0 / 6.0) * (1.0 + ln.powf(1.0 / 12.0)),
    })
}

/// `Σ_{l prime} l^{-n}` to within `tol`.
///
/// Primes are summed up to the first `L` with `∫_L^∞ x^{-n} dx < tol`, which
/// dominates the tail.
pub fn prime_zeta(n: u32, tol: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid(format!("prime zeta diverges at n = {n}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid(format!("tolerance {tol} must be positive")));
    }
    let nf = f64::from(n);
    let cutoff = (1.0 / (tol * (nf - 1.0))).powf(1.0 / (nf - 1.0)).ceil() as u64 + 1;
    if cutoff > ZETA_MAX_CUTOFF {
        return Err(Error::invalid(format!("tolerance {tol} needs primes up to {cutoff}")));
    }
    // Smallest terms first.
    Ok(primes_up_to(cutoff).iter().rev().map(|&l| (l as f64).powi(-(n as i32))).sum())
}

/// `#{x in [1, M] : l^n | x for some prime l}` by inclusion–exclusion over
/// squarefree `d` with `d^n <= M`.
pub fn count_pn(max: u64, n: u32) -> Result<u64> {
    if n < 2 {
        return Err(Error::invalid(format!("exponent {n} must be at least 2")));
    }
    let top = integer_root(max, n);
    let mu = mobius_up_to(top);
    let mut total: i64 = 0;
    for d in 2..=top {
        total -= i64::from(mu[d as usize]) * (max / d.pow(n)) as i64;
    }
    Ok(total as u64)
}

/// Möbius function on `0..=limit` (index 0 unused).
pub(crate) fn mobius_up_to(limit: u64) -> Vec<i8> {
    let mut mu = vec![1i8; limit as usize + 1];
    for p in primes_up_to(limit) {
        let p = p as usize;
        for j in (p..mu.len()).step_by(p) {
            mu[j] = -mu[j];
        }
        let sq = p * p;
        for j in (sq..mu.len()).step_by(sq) {
            mu[j] = 0;
        }
    }
    mu
}

/// `(4 - P(4) P(6)) M^2`.
pub fn iso_adjusted_c_lower(max: u64) -> Result<f64> {
    let product = prime_zeta(4, ZETA_TOLERANCE)? * prime_zeta(6, ZETA_TOLERANCE)?;
    Ok((4.0 - product) * (max as f64).powi(2))
}

/// Inputs and value of one Schmidt bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtInput {
    pub prime: TorsionPrime,
    /// Which parameter the bound is applied for (`k = 1` or `k = 1/3`).
    pub k: String,
    pub r: u32,
    pub s: u32,
    /// The height used in the headline bound (`h = M`).
    pub h: f64,
    pub bound: f64,
    /// The height actually forced by `|A|, |B| <= M`.
    pub h_tight: f64,
    /// `None` when `h_tight <= 1`, where the bound is undefined.
    pub bound_tight: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub max_coeff: u64,
    pub bounds: BTreeMap<TorsionPrime, f64>,
    pub schmidt: Vec<SchmidtInput>,
    /// `P(n)` for `n = 4, 6`.
    pub prime_zeta: BTreeMap<u32, f64>,
    /// `|P_n(M)|` for `n = 4, 6`.
    pub pn_counts: BTreeMap<u32, u64>,
    pub c_lower: f64,
    pub c_lower_iso: f64,
}

pub fn bounds_report(max: u64) -> Result<BoundsReport> {
    let mut bounds = BTreeMap::new();
    for p in TorsionPrime::ALL {
        bounds.insert(p, torsion_bound(p, max)?);
    }
    let m = max as f64;
    let schmidt_entry = |prime, k: &str, r, s, h_tight: f64| -> Result<SchmidtInput> {
        Ok(SchmidtInput {
            prime,
            k: k.to_string(),
            r,
            s,
            h: m,
            bound: schmidt_bound(r, s, m)?,
            h_tight,
            bound_tight: if h_tight > 1.0 { Some(schmidt_bound(r, s, h_tight)?) } else { None },
        })
    };
    // Order 5: |A| = 27|F| <= M. Order 7: |B| = 54 k^6 |G| <= M.
    let schmidt = vec![
        schmidt_entry(TorsionPrime::Five, "1", 4, 4, m / 27.0)?,
        schmidt_entry(TorsionPrime::Seven, "1", 12, 12, m / 54.0)?,
        schmidt_entry(TorsionPrime::Seven, "1/3", 12, 12, 27.0 * m / 2.0)?,
    ];
    let mut prime_zeta_values = BTreeMap::new();
    let mut pn_counts = BTreeMap::new();
    for n in [4, 6] {
        prime_zeta_values.insert(n, prime_zeta(n, ZETA_TOLERANCE)?);
        pn_counts.insert(n, count_pn(max, n)?);
    }
    Ok(BoundsReport {
        max_coeff: max,
        bounds,
        schmidt,
        prime_zeta: prime_zeta_values,
        pn_counts,
        c_lower: 4.0 * m * m - 1.0,
        c_lower_iso: iso_adjusted_c_lower(max)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub prime: TorsionPrime,
    pub count: u64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub max_coeff: u64,
    pub rows: Vec<ComparisonRow>,
    pub footnote: String,
}

/// Pair every census count with its bound; fails with an invariant error if a
/// count exceeds its bound.
pub fn emit_comparison(census: &CensusReport, bounds: &BoundsReport) -> Result<Comparison> {
    compare_counts(census.max_coeff, &census.t_counts, bounds)
}

/// [`emit_comparison`] from bare counts, e.g. read back from a census file.
pub fn compare_counts(max: u64, counts: &BTreeMap<TorsionPrime, u64>, bounds: &BoundsReport) -> Result<Comparison> {
    if max != bounds.max_coeff {
        return Err(Error::invalid(format!("census is for M = {max} but bounds are for M = {}", bounds.max_coeff)));
    }
    let mut rows = Vec::new();
    for (&prime, &count) in counts {
        let bound = bounds.bounds[&prime];
        if count as f64 > bound {
            return Err(Error::invariant(format!("|T_{prime}({max})| = {count} exceeds its bound {bound}")));
        }
        rows.push(ComparisonRow { prime, count, bound, ratio: count as f64 / bound });
    }
    Ok(Comparison { max_coeff: max, rows, footnote: PRODUCT_FOOTNOTE.to_string() })
}
