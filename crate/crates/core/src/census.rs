//! Knot tables and batch scans.
//!
//! Table format: CSV with header `name,dt,alternating,genus,signature,...`.
//! Columns `chirality`, `pd` and `source` are optional. `alternating` is
//! `Y`/`N`; `genus` and `signature` may be empty. `chirality` is `same` when
//! the realized DT diagram is the table's chirality, `mirror` when it is the
//! reflection, `zero` when σ = 0 cannot tell them apart.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{parse_dt, realize_dt, CodecError};
use crate::hfk::hfk_for;
use crate::invariants::{assemble, CoherenceClass, InvariantError, KnotInvariants};
use crate::obstructions::{alternating_parity_rule, full_report, Applicability, Conclusion, ObstructionReport};

pub const BUNDLED_TABLE: &str = include_str!("../data/knots10.csv");
pub const BUNDLED_TRIVIAL_ALEXANDER: &str = include_str!("../data/trivial_alexander.csv");

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("cannot read table: {0}")]
    Io(#[from] std::io::Error),
    #[error("row {row}: {msg}")]
    Row { row: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    Same,
    Mirror,
    Zero,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KnotRecord {
    pub name: String,
    pub dt: String,
    pub alternating: bool,
    pub genus: Option<u32>,
    pub signature: Option<i64>,
    pub chirality: Chirality,
    pub pd: Option<String>,
    pub source: String,
}

impl KnotRecord {
    pub fn crossings(&self) -> usize {
        parse_dt(&self.dt).map(|c| c.labels.len()).unwrap_or(0)
    }
}

#[derive(Deserialize)]
struct Row {
    name: String,
    dt: String,
    alternating: String,
    #[serde(default)]
    genus: Option<String>,
    #[serde(default)]
    signature: Option<String>,
    #[serde(default)]
    chirality: Option<String>,
    #[serde(default)]
    pd: Option<String>,
    #[serde(default)]
    source: Option<String>,
}

fn opt<T: std::str::FromStr>(s: &Option<String>) -> Result<Option<T>, String> {
    match s.as_deref().map(str::trim) {
        None | Some("") => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|_| format!("cannot read {v:?}")),
    }
}

fn record(r: Row) -> Result<KnotRecord, String> {
    parse_dt(&r.dt).map_err(|e| e.to_string())?;
    let alternating = match r.alternating.trim() {
        "Y" | "y" | "true" => true,
        "N" | "n" | "false" => false,
        other => return Err(format!("alternating flag {other:?}")),
    };
    let chirality = match r.chirality.as_deref().map(str::trim) {
        Some("same") => Chirality::Same,
        Some("mirror") => Chirality::Mirror,
        Some("zero") => Chirality::Zero,
        None | Some("") => Chirality::Unknown,
        Some(other) => return Err(format!("chirality {other:?}")),
    };
    Ok(KnotRecord {
        name: r.name.trim().to_string(),
        dt: r.dt.trim().to_string(),
        alternating,
        genus: opt(&r.genus)?,
        signature: opt(&r.signature)?,
        chirality,
        pd: r.pd.filter(|p| !p.trim().is_empty()),
        source: r.source.unwrap_or_default(),
    })
}

/// Reads a table. Bad rows are collected, not fatal.
pub fn read_table(input: impl Read) -> (Vec<KnotRecord>, Vec<CensusError>) {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for (k, row) in rdr.deserialize::<Row>().enumerate() {
        let row_no = k + 2;
        match row.map_err(|e| e.to_string()).and_then(record) {
            Ok(r) => good.push(r),
            Err(msg) => bad.push(CensusError::Row { row: row_no, msg }),
        }
    }
    (good, bad)
}

pub fn load_table(path: impl AsRef<Path>) -> Result<(Vec<KnotRecord>, Vec<CensusError>), CensusError> {
    let f = std::fs::File::open(path)?;
    Ok(read_table(f))
}

pub fn bundled_table() -> Vec<KnotRecord> {
    let (good, bad) = read_table(BUNDLED_TABLE.as_bytes());
    assert!(bad.is_empty(), "bundled table is clean");
    good
}

/// A diagram with a known genus and trivial Alexander polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialAlexanderRecord {
    pub name: String,
    pub pd: String,
    pub genus: u32,
    pub source: String,
}

pub fn bundled_trivial_alexander() -> Vec<TrivialAlexanderRecord> {
    #[derive(Deserialize)]
    struct R {
        name: String,
        pd: String,
        genus: u32,
        source: String,
    }
    csv::Reader::from_reader(BUNDLED_TRIVIAL_ALEXANDER.as_bytes())
        .deserialize::<R>()
        .map(|r| {
            let r = r.expect("bundled data is clean");
            TrivialAlexanderRecord { name: r.name, pd: r.pd, genus: r.genus, source: r.source }
        })
        .collect()
}

/// Orders `3_1 < 10_1 < 10_161 < 10_161p`.
pub fn name_order(a: &str, b: &str) -> Ordering {
    fn key(s: &str) -> (u64, u64, String) {
        let (c, rest) = s.split_once('_').unwrap_or((s, ""));
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        let tail = rest[digits.len()..].to_string();
        (c.parse().unwrap_or(u64::MAX), digits.parse().unwrap_or(u64::MAX), tail)
    }
    key(a).cmp(&key(b)).then_with(|| a.cmp(b))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanFilter {
    pub alternating: Option<bool>,
    pub max_crossings: Option<usize>,
    pub min_crossings: Option<usize>,
}

impl ScanFilter {
    pub fn matches(&self, r: &KnotRecord) -> bool {
        let c = r.crossings();
        self.alternating.map_or(true, |a| a == r.alternating)
            && self.max_crossings.map_or(true, |m| c <= m)
            && self.min_crossings.map_or(true, |m| c >= m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordResult {
    pub record: KnotRecord,
    pub invariants: KnotInvariants,
    pub report: ObstructionReport,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub results: Vec<RecordResult>,
    pub failures: Vec<(String, String)>,
    pub by_coherence: BTreeMap<String, usize>,
    pub by_summary: BTreeMap<String, usize>,
    /// records where the alternating parity rule applied
    pub parity_rule_applied: usize,
}

impl ScanSummary {
    pub fn total(&self) -> usize {
        self.results.len()
    }

    pub fn count(&self, class: CoherenceClass) -> usize {
        self.by_coherence.get(&class.to_string()).copied().unwrap_or(0)
    }

    pub fn names_with(&self, class: CoherenceClass) -> Vec<&str> {
        self.results
            .iter()
            .filter(|r| r.invariants.coherence().class == class)
            .map(|r| r.record.name.as_str())
            .collect()
    }
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// Realize → invariants → report for one record. Alternating records use
/// the computed genus and a thin HFK table; others take the table genus.
pub fn process(r: &KnotRecord) -> Result<RecordResult, RecordError> {
    let d = realize_dt(&parse_dt(&r.dt)?)?;
    let mut warnings = Vec::new();
    let diagram_alt = d.is_alternating();
    if diagram_alt != r.alternating {
        warnings.push(format!("table says alternating={}, realized diagram says {}", r.alternating, diagram_alt));
    }
    let genus_in = if diagram_alt { None } else { r.genus };
    let inv = assemble(&r.name, &d, genus_in)?;
    if let (Some(g), Some(tg)) = (inv.genus, r.genus) {
        if g != tg {
            warnings.push(format!("computed genus {g}, table genus {tg}"));
        }
    }
    if let Some(s) = r.signature {
        let ok = match r.chirality {
            Chirality::Same => inv.signature == s,
            Chirality::Mirror => inv.signature == -s,
            Chirality::Zero | Chirality::Unknown => inv.signature.abs() == s.abs(),
        };
        if !ok {
            warnings.push(format!("signature {} does not match table value {s}", inv.signature));
        }
    }
    let table = hfk_for(&inv).ok();
    let report = full_report(&inv, table.as_ref());
    Ok(RecordResult { record: r.clone(), invariants: inv, report, warnings })
}

/// Processes the matching records in parallel; output is in name order.
pub fn scan<F>(records: &[KnotRecord], filter: F) -> ScanSummary
where
    F: Fn(&KnotRecord) -> bool + Sync,
{
    let outcomes: Vec<(String, Result<RecordResult, String>)> = records
        .par_iter()
        .filter(|r| filter(r))
        .map(|r| (r.name.clone(), process(r).map_err(|e| e.to_string())))
        .collect();
    let mut s = ScanSummary::default();
    for (name, o) in outcomes {
        match o {
            Ok(res) => s.results.push(res),
            Err(e) => s.failures.push((name, e)),
        }
    }
    s.results.sort_by(|a, b| name_order(&a.record.name, &b.record.name));
    s.failures.sort_by(|a, b| name_order(&a.0, &b.0));
    for r in &s.results {
        *s.by_coherence.entry(r.invariants.coherence().class.to_string()).or_default() += 1;
        *s.by_summary.entry(r.report.summary.to_string()).or_default() += 1;
        if alternating_parity_rule(&r.invariants).applicability == Applicability::Applied {
            s.parity_rule_applied += 1;
        }
    }
    s
}

/// Summary conclusion for a name, if it was scanned.
pub fn summary_of<'a>(s: &'a ScanSummary, name: &str) -> Option<&'a Conclusion> {
    s.results.iter().find(|r| r.record.name == name).map(|r| &r.report.summary)
}
