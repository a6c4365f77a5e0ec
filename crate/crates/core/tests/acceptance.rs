//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so every line is printed.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use torsion_census::bounds::{bounds_report, emit_comparison, prime_zeta};
use torsion_census::census::{count_c, run_census_sets, Census, CensusConfig};
use torsion_census::curve::reduced_discriminant_i128;
use torsion_census::families::thue::{gen_thue_scaled, ThueFamily};
use torsion_census::torsion::torsion_structure;
use torsion_census::{torsion_subgroup, CurvePair, CurveSet, PointOrder, RationalPoint, TorsionPrime};

type Outcome = Result<String, String>;

/// Census runs shared between criteria, computed once.
struct Runs {
    by_max: BTreeMap<u64, Census>,
    oracle: BTreeMap<u64, (Census, Census)>,
}

impl Runs {
    fn census(&mut self, max: u64) -> Result<&Census, String> {
        if let std::collections::btree_map::Entry::Vacant(slot) = self.by_max.entry(max) {
            slot.insert(run_census_sets(&CensusConfig::new(max)).map_err(|e| e.to_string())?);
        }
        Ok(&self.by_max[&max])
    }
}

fn counts_line(c: &Census) -> String {
    let parts: Vec<String> = c.report.t_counts.iter().map(|(p, n)| format!("T{p}={n}")).collect();
    parts.join(" ")
}

fn table_reproduction(runs: &mut Runs, max: u64, expected: [u64; 4]) -> Outcome {
    let census = runs.census(max)?;
    let expected: BTreeMap<TorsionPrime, u64> = TorsionPrime::ALL.into_iter().zip(expected).collect();
    let got = &census.report.t_counts;
    let mismatched: Vec<String> = expected
        .iter()
        .filter(|(p, n)| got.get(p) != Some(n))
        .map(|(p, n)| format!("T{p}: expected {n}, got {}", got.get(p).copied().unwrap_or(0)))
        .collect();
    if mismatched.is_empty() {
        Ok(counts_line(census))
    } else {
        Err(mismatched.join("; "))
    }
}

fn oracle_equivalence(runs: &mut Runs) -> Outcome {
    let mut notes = Vec::new();
    for max in [50u64, 100, 150] {
        let fast = run_census_sets(&CensusConfig::new(max)).map_err(|e| e.to_string())?;
        let slow = run_census_sets(&CensusConfig { oracle: true, ..CensusConfig::new(max) }).map_err(|e| e.to_string())?;
        for p in TorsionPrime::ALL {
            if fast.sets[&p] != slow.sets[&p] {
                return Err(format!("M={max}: T{p} differs ({} vs {})", fast.sets[&p].len(), slow.sets[&p].len()));
            }
        }
        if fast.union != slow.union || fast.report != slow.report {
            return Err(format!("M={max}: union or report differs"));
        }
        notes.push(format!("M={max} |T|={}", fast.union.len()));
        runs.oracle.insert(max, (fast, slow));
    }
    Ok(notes.join(", "))
}

fn bound_conformance(runs: &mut Runs) -> Outcome {
    let mut worst = (0.0f64, String::new());
    for max in [100u64, 1_000, 10_000, 100_000] {
        let census = runs.census(max)?;
        let bounds = bounds_report(max).map_err(|e| e.to_string())?;
        let cmp = emit_comparison(&census.report, &bounds).map_err(|e| e.to_string())?;
        for row in cmp.rows {
            if row.ratio > worst.0 {
                worst = (row.ratio, format!("T{}({max})", row.prime));
            }
        }
    }
    Ok(format!("largest count/bound ratio {:.4} at {}", worst.0, worst.1))
}

fn density_trend(runs: &mut Runs) -> Outcome {
    let d: Vec<_> = [100u64, 1_000, 10_000]
        .into_iter()
        .map(|m| runs.census(m).map(|c| c.report.density()))
        .collect::<Result<_, _>>()?;
    let text = format!("{} > {} > {}", d[0], d[1], d[2]);
    if d[0] > d[1] && d[1] > d[2] {
        Ok(text)
    } else {
        Err(text)
    }
}

fn prime_zeta_values() -> Outcome {
    let p4 = prime_zeta(4, 1e-9).map_err(|e| e.to_string())?;
    let p6 = prime_zeta(6, 1e-9).map_err(|e| e.to_string())?;
    let text = format!("P(4)={p4:.9} P(6)={p6:.9}");
    if (p4 - 0.0769931).abs() <= 1e-6 && (p6 - 0.0170701).abs() <= 1e-6 {
        Ok(text)
    } else {
        Err(text)
    }
}

fn mazur_conformity(runs: &mut Runs) -> Outcome {
    // Curves touched by the table and oracle criteria. The oracle runs already
    // classified every pair of their boxes; repeat that for the family sets.
    for max in [10_000u64, 100_000] {
        runs.census(max)?;
    }
    let mut sets: Vec<&CurveSet> = Vec::new();
    for max in [10_000u64, 100_000] {
        sets.push(&runs.by_max[&max].union);
    }
    for (fast, _) in runs.oracle.values() {
        sets.push(&fast.union);
    }
    let all = CurveSet::union(sets);
    let failures: Vec<String> = all
        .as_slice()
        .par_iter()
        .filter_map(|&(a, b)| match torsion_structure(a, b) {
            Ok(s) if s.is_mazur() && !s.is_trivial() => None,
            Ok(s) => Some(format!("({a},{b}) -> {s}")),
            Err(e) => Some(format!("({a},{b}) -> {e}")),
        })
        .collect();
    if let Some(first) = failures.first() {
        return Err(format!("{} failures, first {first}", failures.len()));
    }
    // Full groups, re-validated with exact arithmetic, on a spread-out sample.
    let step = (all.len() / 2000).max(1);
    let mut checked = 0;
    for &(a, b) in all.as_slice().iter().step_by(step) {
        let curve = CurvePair::from_i64(a, b).map_err(|e| e.to_string())?;
        let group = torsion_subgroup(&curve).map_err(|e| format!("({a},{b}): {e}"))?;
        group.validate(&curve).map_err(|e| format!("({a},{b}): {e}"))?;
        if group.points.iter().any(|(p, o)| !p.is_integral() || *o == 11 || *o > 12) {
            return Err(format!("({a},{b}): bad point in {:?}", group.points));
        }
        checked += 1;
    }
    Ok(format!("{} curves classified, {checked} groups validated exactly", all.len()))
}

fn witness_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7031_7a32);
    let (mut two, mut three) = (0, 0);
    while two < 1000 || three < 1000 {
        let z1: i64 = rng.gen_range(-2000..=2000);
        let z2: i64 = rng.gen_range(-2000..=2000);
        let order_of = |a: BigInt, b: BigInt, x: BigInt, y: BigInt| -> Option<Result<PointOrder, String>> {
            let curve = CurvePair::new(a, b).ok()?;
            let p = RationalPoint::integral(x, y);
            if !curve.contains(&p) {
                return Some(Err(format!("{p} not on {curve}")));
            }
            Some(curve.point_order(&p).map_err(|e| e.to_string()))
        };
        let (bz1, bz2) = (BigInt::from(z1), BigInt::from(z2));
        if two < 1000 {
            if let Some(order) = order_of(&bz1 - &bz2 * &bz2, &bz1 * &bz2, -bz2.clone(), BigInt::from(0)) {
                if order? != PointOrder::Finite(2) {
                    return Err(format!("order-2 witness fails at ({z1},{z2})"));
                }
                two += 1;
            }
        }
        if three < 1000 {
            let z1_2 = &bz1 * &bz1;
            let a = BigInt::from(27) * &z1_2 * &z1_2 + BigInt::from(6) * &bz1 * &bz2;
            let b = &bz2 * &bz2 - BigInt::from(27) * &z1_2 * &z1_2 * &z1_2;
            let x = BigInt::from(3) * &z1_2;
            let y = BigInt::from(9) * &z1_2 * &bz1 + &bz2;
            if let Some(order) = order_of(a, b, x, y) {
                if order? != PointOrder::Finite(3) {
                    return Err(format!("order-3 witness fails at ({z1},{z2})"));
                }
                three += 1;
            }
        }
    }
    Ok("1000 order-2 and 1000 order-3 witnesses".into())
}

fn box_completeness() -> Outcome {
    let mut notes = Vec::new();
    for family in [ThueFamily::order5(), ThueFamily::order7()] {
        let safe = gen_thue_scaled(family, 10_000, 1).map_err(|e| e.to_string())?;
        let doubled = gen_thue_scaled(family, 10_000, 2).map_err(|e| e.to_string())?;
        if safe != doubled {
            return Err(format!("order {}: {} vs {} pairs", family.prime, safe.len(), doubled.len()));
        }
        notes.push(format!("T{}: {} pairs", family.prime, safe.len()));
    }
    Ok(notes.join(", "))
}

fn count_c_exactness() -> Outcome {
    for max in [10u64, 100, 1000] {
        let m = max as i64;
        let singular = (-m..=m)
            .flat_map(|a| (-m..=m).map(move |b| (a, b)))
            .filter(|&(a, b)| reduced_discriminant_i128(a, b) == 0)
            .count() as u64;
        let side = 2 * max + 1;
        let c = count_c(max).map_err(|e| e.to_string())?;
        if c != side * side - singular {
            return Err(format!("M={max}: count_C={c}, scan gives {}", side * side - singular));
        }
        if c < 4 * max * max - 1 {
            return Err(format!("M={max}: count_C={c} below 4M^2-1"));
        }
    }
    Ok("M = 10, 100, 1000".into())
}

fn main() {
    // Keep panic output to the one-line report.
    panic::set_hook(Box::new(|_| {}));
    let mut runs = Runs { by_max: BTreeMap::new(), oracle: BTreeMap::new() };
    type Criterion<'a> = (&'a str, Box<dyn FnMut(&mut Runs) -> Outcome + 'a>);
    let mut criteria: Vec<Criterion> = vec![
        ("table reproduction, M=10^4", Box::new(|r| table_reproduction(r, 10_000, [204_220, 507, 1, 1]))),
        ("table reproduction, M=10^5", Box::new(|r| table_reproduction(r, 100_000, [2_484_196, 1_935, 3, 1]))),
        ("oracle equivalence, M=50/100/150", Box::new(oracle_equivalence)),
        ("bound conformance, M=10^2..10^5", Box::new(bound_conformance)),
        ("density decreasing, M=10^2/10^3/10^4", Box::new(density_trend)),
        ("prime zeta P(4), P(6)", Box::new(|_| prime_zeta_values())),
        ("Mazur conformity", Box::new(mazur_conformity)),
        ("parametrization witnesses", Box::new(|_| witness_identities())),
        ("box completeness, orders 5 and 7", Box::new(|_| box_completeness())),
        ("count_C exactness", Box::new(|_| count_c_exactness())),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter_mut().enumerate() {
        let start = Instant::now();
        let outcome = match panic::catch_unwind(AssertUnwindSafe(|| check(&mut runs))) {
            Ok(o) => o,
            Err(cause) => Err(cause
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| cause.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
