//! Exact counts of `C(M)`, `T_p(M)` and `T(M)` over the box `|A|, |B| <= M`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{mobius_up_to, torsion_bound};
use crate::curve::{is_minimal_pair_i64, reduced_discriminant_i128};
use crate::error::{Error, Result};
use crate::families::{generate, CurveSet, TorsionPrime, MAX_COEFF_BOUND};
use crate::torsion::torsion_structure;

/// Largest `M` for which a full brute-force scan is allowed.
pub const ORACLE_MAX: u64 = 1000;

/// Whether every coefficient pair counts, or only pairs not of the form
/// `(l^4 a, l^6 b)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    #[default]
    Pairs,
    MinimalPairs,
}

impl fmt::Display for CountMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMode::Pairs => "pairs",
            CountMode::MinimalPairs => "minimal_pairs",
        })
    }
}

impl FromStr for CountMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pairs" => Ok(CountMode::Pairs),
            "minimal_pairs" | "minimal-pairs" => Ok(CountMode::MinimalPairs),
            _ => Err(Error::invalid(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusConfig {
    pub max_coeff: u64,
    pub primes: Vec<TorsionPrime>,
    pub mode: CountMode,
    /// Count by scanning every pair with the torsion oracle instead of the
    /// family generators.
    pub oracle: bool,
    pub workers: usize,
    pub timings: bool,
}

impl CensusConfig {
    pub fn new(max_coeff: u64) -> Self {
        CensusConfig {
            max_coeff,
            primes: TorsionPrime::ALL.to_vec(),
            mode: CountMode::Pairs,
            oracle: false,
            workers: 1,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_coeff == 0 {
            return Err(Error::invalid("M must be at least 1"));
        }
        if self.max_coeff > MAX_COEFF_BOUND {
            return Err(Error::invalid(format!("M must be at most {MAX_COEFF_BOUND}")));
        }
        if self.oracle && self.max_coeff > ORACLE_MAX {
            return Err(Error::invalid(format!("oracle mode needs M <= {ORACLE_MAX}")));
        }
        if self.workers == 0 {
            return Err(Error::invalid("at least one worker is required"));
        }
        Ok(())
    }
}

/// `|T(M)| / |C(M)|` in lowest terms, with its decimal value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub numerator: u64,
    pub denominator: u64,
    pub decimal: f64,
}

impl Density {
    fn new(t_union: u64, c_count: u64) -> Self {
        let g = t_union.gcd(&c_count).max(1);
        let (numerator, denominator) = (t_union / g, c_count / g);
        Density { numerator, denominator, decimal: numerator as f64 / denominator as f64 }
    }

    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.numerator, self.denominator)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub max_coeff: u64,
    pub mode: CountMode,
    pub c_count: u64,
    pub t_counts: BTreeMap<TorsionPrime, u64>,
    pub t_union: u64,
    pub density: Density,
    /// Per-prime upper bounds; empty for `M = 1`, where they are undefined.
    pub bounds: BTreeMap<TorsionPrime, f64>,
    /// Seconds per phase, only when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed: Option<BTreeMap<String, f64>>,
}

impl CensusReport {
    /// `t_union / c_count`, 0 when no prime was counted.
    pub fn density(&self) -> Ratio<u64> {
        self.density.ratio()
    }
}

/// A finished census: the report plus the sets it counts.
#[derive(Clone, Debug)]
pub struct Census {
    pub report: CensusReport,
    pub sets: BTreeMap<TorsionPrime, CurveSet>,
    pub union: CurveSet,
}

/// Number of nonsingular pairs with `|A|, |B| <= M`.
///
/// `4A^3 + 27B^2 = 0` forces `A = -3k^2`, `B = ±2k^3`, so the singular pairs
/// are `(0, 0)` and two per `k >= 1` with `3k^2 <= M`, `2k^3 <= M`.
pub fn count_c(max: u64) -> Result<u64> {
    if max == 0 {
        return Err(Error::invalid("M must be at least 1"));
    }
    let side = 2 * max + 1;
    Ok(side * side - singular_pairs(max).len() as u64)
}

/// Number of nonsingular pairs in the box that are minimal.
///
/// Möbius inversion over `d` with `d^4 | A`, `d^6 | B`, leaving out `(0, 0)`
/// (which every `d` divides), minus the minimal singular pairs.
pub fn count_c_minimal(max: u64) -> Result<u64> {
    if max == 0 {
        return Err(Error::invalid("M must be at least 1"));
    }
    let top = crate::arith::integer_root(max, 4);
    let mu = mobius_up_to(top);
    let mut total: i64 = 0;
    for d in 1..=top {
        let box_size = (2 * (max / d.pow(4)) + 1) * (2 * (max / d.pow(6)) + 1) - 1;
        total += i64::from(mu[d as usize]) * box_size as i64;
    }
    let singular = singular_pairs(max).into_iter().filter(|&(a, b)| is_minimal_pair_i64(a, b)).count();
    Ok(total as u64 - singular as u64)
}

fn singular_pairs(max: u64) -> Vec<(i64, i64)> {
    let mut out = vec![(0, 0)];
    let m = max as i64;
    let mut k = 1i64;
    while 3 * k * k <= m && 2 * k * k * k <= m {
        out.push((-3 * k * k, 2 * k * k * k));
        out.push((-3 * k * k, -2 * k * k * k));
        k += 1;
    }
    out
}

pub fn run_census(config: &CensusConfig) -> Result<CensusReport> {
    Ok(run_census_sets(config)?.report)
}

/// As [`run_census`], keeping the counted sets.
pub fn run_census_sets(config: &CensusConfig) -> Result<Census> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start {} workers: {e}", config.workers)))?;
    pool.install(|| census_in_pool(config))
}

fn census_in_pool(config: &CensusConfig) -> Result<Census> {
    let max = config.max_coeff;
    let mut primes = config.primes.clone();
    primes.sort();
    primes.dedup();
    let mut elapsed = BTreeMap::new();
    let mut timed = |phase: String, start: Instant| {
        elapsed.insert(phase, start.elapsed().as_secs_f64());
    };

    let mut sets = if config.oracle {
        let start = Instant::now();
        let sets = oracle_sets(max, &primes)?;
        timed("oracle_scan".into(), start);
        sets
    } else {
        let mut sets = BTreeMap::new();
        for &p in &primes {
            let start = Instant::now();
            sets.insert(p, generate(p, max)?);
            timed(format!("generate_{p}"), start);
        }
        sets
    };
    if config.mode == CountMode::MinimalPairs {
        for set in sets.values_mut() {
            *set = set.filter(is_minimal_pair_i64);
        }
    }

    let start = Instant::now();
    let union = CurveSet::union(sets.values());
    timed("union".into(), start);
    let start = Instant::now();
    let c_count = match config.mode {
        CountMode::Pairs => count_c(max)?,
        CountMode::MinimalPairs => count_c_minimal(max)?,
    };
    timed("count_c".into(), start);

    let t_counts: BTreeMap<TorsionPrime, u64> = sets.iter().map(|(&p, s)| (p, s.len() as u64)).collect();
    let t_union = union.len() as u64;
    let largest = t_counts.values().copied().max().unwrap_or(0);
    let sum: u64 = t_counts.values().sum();
    if t_union < largest || t_union > sum {
        return Err(Error::invariant(format!("union of size {t_union} outside [{largest}, {sum}]")));
    }
    let mut bounds = BTreeMap::new();
    if max >= 2 {
        for &p in &primes {
            bounds.insert(p, torsion_bound(p, max)?);
        }
    }
    let report = CensusReport {
        max_coeff: max,
        mode: config.mode,
        c_count,
        t_counts,
        t_union,
        density: Density::new(t_union, c_count),
        bounds,
        elapsed: config.timings.then_some(elapsed),
    };
    Ok(Census { report, sets, union })
}

/// Scan every nonsingular pair in the box. Rows of constant `A` are split
/// across the pool; the per-row results are merged in row order.
fn oracle_sets(max: u64, primes: &[TorsionPrime]) -> Result<BTreeMap<TorsionPrime, CurveSet>> {
    let m = max as i64;
    let rows: Vec<Vec<Vec<(i64, i64)>>> = (-m..=m)
        .into_par_iter()
        .map(|a| {
            let mut row = vec![Vec::new(); primes.len()];
            for b in -m..=m {
                if reduced_discriminant_i128(a, b) == 0 {
                    continue;
                }
                let structure = torsion_structure(a, b)?;
                for (i, p) in primes.iter().enumerate() {
                    if structure.has_order(p.value()) {
                        row[i].push((a, b));
                    }
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut sets = BTreeMap::new();
    for (i, &p) in primes.iter().enumerate() {
        sets.insert(p, CurveSet::from_pairs(rows.iter().flat_map(|r| r[i].iter().copied()).collect()));
    }
    Ok(sets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(max: u64) -> CensusConfig {
        CensusConfig::new(max)
    }

    #[test]
    fn count_c_examples() {
        assert_eq!(count_c(1).unwrap(), 8);
        assert_eq!(count_c(10).unwrap(), 438);
        assert!(count_c(0).is_err());
        for m in [1u64, 2, 5, 37, 200] {
            assert!(count_c(m).unwrap() >= 4 * m * m - 1);
        }
    }

    #[test]
    fn minimal_count_matches_scan() {
        for m in [1u64, 16, 64, 100, 300] {
            let mi = m as i64;
            let mut n = 0;
            for a in -mi..=mi {
                for b in -mi..=mi {
                    if reduced_discriminant_i128(a, b) != 0 && is_minimal_pair_i64(a, b) {
                        n += 1;
                    }
                }
            }
            assert_eq!(count_c_minimal(m).unwrap(), n, "M={m}");
        }
    }

    #[test]
    fn config_validation() {
        assert!(config(0).validate().is_err());
        assert!(CensusConfig { oracle: true, ..config(1001) }.validate().is_err());
        assert!(CensusConfig { oracle: true, ..config(1000) }.validate().is_ok());
        assert!(CensusConfig { workers: 0, ..config(10) }.validate().is_err());
    }

    #[test]
    fn six_torsion_counted_once() {
        let census = run_census_sets(&config(1)).unwrap();
        assert!(census.sets[&TorsionPrime::Two].contains(0, 1));
        assert!(census.sets[&TorsionPrime::Three].contains(0, 1));
        assert_eq!(census.union.iter().filter(|&p| p == (0, 1)).count(), 1);
        let r = &census.report;
        assert!(r.t_union < r.t_counts.values().sum::<u64>());
        assert!(r.bounds.is_empty());
    }

    #[test]
    fn density_is_exact() {
        let r = run_census(&config(30)).unwrap();
        assert_eq!(r.density() * r.c_count, Ratio::from_integer(r.t_union));
        let none = run_census(&CensusConfig { primes: vec![], ..config(30) }).unwrap();
        assert_eq!(none.t_union, 0);
        assert_eq!(none.density(), Ratio::from_integer(0));
        assert_eq!(none.density.decimal, 0.0);
    }

    #[test]
    fn oracle_agrees_on_small_box() {
        let fast = run_census(&config(40)).unwrap();
        let slow = run_census(&CensusConfig { oracle: true, ..config(40) }).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn minimal_counts_do_not_exceed_pairs() {
        let pairs = run_census(&config(200)).unwrap();
        let minimal = run_census(&CensusConfig { mode: CountMode::MinimalPairs, ..config(200) }).unwrap();
        for (p, n) in &minimal.t_counts {
            assert!(*n <= pairs.t_counts[p]);
        }
        assert!(minimal.c_count <= pairs.c_count);
    }

    #[test]
    fn timings_only_on_request() {
        assert!(run_census(&config(5)).unwrap().elapsed.is_none());
        let timed = run_census(&CensusConfig { timings: true, ..config(5) }).unwrap();
        assert!(timed.elapsed.unwrap().contains_key("union"));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("pairs".parse::<CountMode>().unwrap(), CountMode::Pairs);
        assert_eq!("minimal_pairs".parse::<CountMode>().unwrap(), CountMode::MinimalPairs);
        assert!("iso".parse::<CountMode>().is_err());
    }
}
