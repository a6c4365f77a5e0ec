//! CSV and JSON renderings of reports.
//!
//! CSV is UTF-8, comma separated, LF terminated, with a header row. Counts are
//! exact integers; bounds in count tables carry one decimal place and reals in
//! bounds tables fifteen significant digits. JSON keys follow struct
//! declaration order and sorted map order, so equal payloads give equal bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundsReport, Comparison};
use crate::census::CensusReport;
use crate::error::{Error, Result};
use crate::families::TorsionPrime;
use crate::torsion::TorsionGroup;
use crate::curve::{CurvePair, RationalPoint};

/// `x` with fifteen significant digits, trailing zeros dropped.
pub fn format_sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.14e}");
        let (mantissa, exponent) = s.split_once('e').expect("exponent form");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::invalid(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::invalid(format!("csv: {e}")))
}

fn csv_err(e: csv::Error) -> Error {
    Error::invalid(format!("csv: {e}"))
}

/// `M,p,count,bound,mode`, one row per prime and a `union` row whose bound is
/// the sum of the per-prime bounds.
pub fn census_csv(report: &CensusReport) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(["M", "p", "count", "bound", "mode"]).map_err(csv_err)?;
    let m = report.max_coeff.to_string();
    let mode = report.mode.to_string();
    let bound_cell = |b: Option<f64>| b.map(|b| format!("{b:.1}")).unwrap_or_default();
    for (p, count) in &report.t_counts {
        let bound = bound_cell(report.bounds.get(p).copied());
        w.write_record([m.as_str(), &p.to_string(), &count.to_string(), &bound, &mode]).map_err(csv_err)?;
    }
    let union_bound = if report.bounds.is_empty() { None } else { Some(report.bounds.values().sum()) };
    w.write_record([m.as_str(), "union", &report.t_union.to_string(), &bound_cell(union_bound), &mode])
        .map_err(csv_err)?;
    finish(w)
}

/// Per-prime counts read back from a census document, CSV or JSON.
pub fn parse_census_counts(text: &str) -> Result<(u64, BTreeMap<TorsionPrime, u64>)> {
    if text.trim_start().starts_with('{') {
        let report: CensusReport =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("census json: {e}")))?;
        return Ok((report.max_coeff, report.t_counts));
    }
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(csv_err)?.clone();
    if headers.iter().collect::<Vec<_>>() != ["M", "p", "count", "bound", "mode"] {
        return Err(Error::invalid(format!("unexpected census header {headers:?}")));
    }
    let mut max = None;
    let mut counts = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let m: u64 = record[0].parse().map_err(|_| Error::invalid(format!("bad M {:?}", &record[0])))?;
        if *max.get_or_insert(m) != m {
            return Err(Error::invalid("census file mixes several values of M"));
        }
        if &record[1] == "union" {
            continue;
        }
        let p: u32 = record[1].parse().map_err(|_| Error::invalid(format!("bad prime {:?}", &record[1])))?;
        let count: u64 = record[2].parse().map_err(|_| Error::invalid(format!("bad count {:?}", &record[2])))?;
        counts.insert(TorsionPrime::try_from(p)?, count);
    }
    let max = max.ok_or_else(|| Error::invalid("census file has no rows"))?;
    Ok((max, counts))
}

/// `M,quantity,key,value` rows for a bounds report and, optionally, its
/// comparison with a census.
pub fn bounds_csv(report: &BoundsReport, comparison: Option<&Comparison>) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(["M", "quantity", "key", "value"]).map_err(csv_err)?;
    let m = report.max_coeff.to_string();
    let mut row = |q: &str, k: &str, v: String| w.write_record([m.as_str(), q, k, &v]).map_err(csv_err);
    for (p, b) in &report.bounds {
        row("torsion_bound", &p.to_string(), format_sig15(*b))?;
    }
    for s in &report.schmidt {
        let key = format!("p={} k={} r={} s={}", s.prime, s.k, s.r, s.s);
        row("schmidt_h", &key, format_sig15(s.h))?;
        row("schmidt_bound", &key, format_sig15(s.bound))?;
        row("schmidt_h_tight", &key, format_sig15(s.h_tight))?;
        row("schmidt_bound_tight", &key, s.bound_tight.map(format_sig15).unwrap_or_default())?;
    }
    for (n, v) in &report.prime_zeta {
        row("prime_zeta", &n.to_string(), format_sig15(*v))?;
    }
    for (n, v) in &report.pn_counts {
        row("pn_count", &n.to_string(), v.to_string())?;
    }
    row("c_lower", "", format_sig15(report.c_lower))?;
    row("c_lower_iso", "", format_sig15(report.c_lower_iso))?;
    if let Some(c) = comparison {
        for r in &c.rows {
            let p = r.prime.to_string();
            row("count", &p, r.count.to_string())?;
            row("ratio", &p, format_sig15(r.ratio))?;
        }
        row("footnote", "", c.footnote.clone())?;
    }
    finish(w)
}

/// Bounds report plus the optional comparison, as one JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsDocument {
    pub bounds: BoundsReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointEntry {
    pub x: String,
    pub y: String,
    pub order: u32,
}

/// Torsion of one curve, with exact integer coordinates as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionDocument {
    pub a: String,
    pub b: String,
    pub structure: String,
    pub generators: Vec<[String; 2]>,
    pub points: Vec<PointEntry>,
}

fn coords(p: &RationalPoint) -> [String; 2] {
    match p.integer_coords() {
        Some((x, y)) => [x.to_string(), y.to_string()],
        None => unreachable!("torsion points are integral"),
    }
}

impl TorsionDocument {
    pub fn new(curve: &CurvePair, group: &TorsionGroup) -> Self {
        TorsionDocument {
            a: curve.a().to_string(),
            b: curve.b().to_string(),
            structure: group.structure.to_string(),
            generators: group.generators.iter().map(coords).collect(),
            points: group
                .points
                .iter()
                .map(|(p, order)| {
                    let [x, y] = coords(p);
                    PointEntry { x, y, order: *order }
                })
                .collect(),
        }
    }
}

/// One-line summary such as `Z/7Z, generator (3,8)` or `trivial`.
pub fn torsion_text(group: &TorsionGroup) -> String {
    if group.structure.is_trivial() {
        return group.structure.to_string();
    }
    let gens: Vec<String> = group.generators.iter().map(|g| format!("({})", coords(g).join(","))).collect();
    let noun = if gens.len() == 1 { "generator" } else { "generators" };
    format!("{}, {noun} {}", group.structure, gens.join(", "))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::invalid(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}
