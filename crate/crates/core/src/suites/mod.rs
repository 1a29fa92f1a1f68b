//! Fixed check lists with deterministic JSON and text reports.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::feasibility::BUNDLED;
use crate::runtime;
use crate::structures::{load_catalog, to_dsl};

mod checks;

pub const TOOL: &str = "invarforms";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const SUITES: &[&str] = &["surfaces", "nilmanifolds6", "solvclasses", "nakamura", "lefschetz", "cohomology"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Witness,
    CertifiedNonexistence,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Witness => "WITNESS",
            Status::CertifiedNonexistence => "CERTIFIED_NONEXISTENCE",
            Status::Unknown => "UNKNOWN",
        };
        f.pad(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub suite: String,
    pub name: String,
    pub fixture: String,
    pub claim: String,
    pub status: Status,
    pub expected: Status,
    pub data: Value,
    pub runtime_ms: u64,
}

impl Record {
    pub fn as_expected(&self) -> bool {
        self.status == self.expected
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub suite: String,
    pub seed: u64,
    pub input_digest: String,
    pub records: Vec<Record>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub seed: u64,
    /// Record wall-clock times; reports are then no longer reproducible.
    pub timings: bool,
}

/// Exit code for a suite run: 0 when every record has its expected status.
pub fn exit_code(records: &[Record]) -> i32 {
    let off: Vec<&Record> = records.iter().filter(|r| !r.as_expected()).collect();
    if off.is_empty() {
        0
    } else if off.iter().any(|r| r.status == Status::Fail) {
        2
    } else if off.iter().any(|r| r.status == Status::Unknown) {
        4
    } else if off.iter().any(|r| r.status == Status::CertifiedNonexistence) {
        3
    } else {
        2
    }
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        exit_code(&self.records)
    }

    pub fn to_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("report serializes"))
    }

    pub fn from_json(text: &str) -> Result<Report> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Pretty JSON with sorted keys; panics on floating point numbers.
pub fn canonical_json(v: &Value) -> String {
    assert_no_floats(v);
    // serde_json's default map is ordered by key.
    let sorted: Value = serde_json::from_str(&v.to_string()).expect("valid json");
    let mut out = serde_json::to_string_pretty(&sorted).expect("json");
    out.push('\n');
    out
}

fn assert_no_floats(v: &Value) {
    match v {
        Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "floating point value {} in report", n),
        Value::Array(a) => a.iter().for_each(assert_no_floats),
        Value::Object(m) => m.values().for_each(assert_no_floats),
        _ => {}
    }
}

/// Hex SHA-256 of the canonical JSON of `v`.
pub fn digest(v: &Value) -> String {
    let bytes = Sha256::digest(canonical_json(v).as_bytes());
    bytes.iter().map(|b| format!("{:02x}", b)).collect()
}

fn input_digest(suite: &str, seed: u64, checks: &[checks::Check]) -> String {
    let mut fixtures = BTreeMap::new();
    for c in checks {
        for f in c.fixture.split('+') {
            if let Ok(spec) = load_catalog(f) {
                fixtures.insert(f.to_string(), to_dsl(&spec));
            }
        }
    }
    let certs: BTreeMap<&str, &str> = BUNDLED.iter().map(|b| (b.name, b.json)).collect();
    digest(&json!({"suite": suite, "seed": seed.to_string(), "fixtures": fixtures, "certificates": certs}))
}

fn run_check(suite: &str, c: &checks::Check, opts: &RunOptions) -> Record {
    let start = Instant::now();
    let (status, data) = match (c.run)(opts) {
        Ok(o) => (o.status, o.data),
        Err(e) => (Status::Fail, json!({"error": e.to_string()})),
    };
    let runtime_ms = if opts.timings { start.elapsed().as_millis() as u64 } else { 0 };
    Record {
        suite: suite.to_string(),
        name: c.name.to_string(),
        fixture: c.fixture.to_string(),
        claim: c.claim.to_string(),
        status,
        expected: c.expected,
        data,
        runtime_ms,
    }
}

/// Runs a named suite, or every suite for `all`.
pub fn run_suite(name: &str, opts: &RunOptions) -> Result<Report> {
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        n if SUITES.contains(&n) => vec![n],
        n => return Err(Error::UnknownName(format!("suite '{}' (expected one of {} or all)", n, SUITES.join(", ")))),
    };
    let jobs: Vec<(&str, checks::Check)> = names.iter().flat_map(|s| checks::suite(s).into_iter().map(move |c| (*s, c))).collect();
    let all: Vec<checks::Check> = names.iter().flat_map(|s| checks::suite(s)).collect();
    let records = runtime::install(|| jobs.par_iter().map(|(s, c)| run_check(s, c, opts)).collect());
    Ok(Report {
        tool: TOOL.to_string(),
        version: VERSION.to_string(),
        suite: name.to_string(),
        seed: opts.seed,
        input_digest: input_digest(name, opts.seed, &all),
        records,
    })
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}  suite {}  seed {}  input {}", self.tool, self.version, self.suite, self.seed, &self.input_digest[..16])?;
        let w = self.records.iter().map(|r| r.suite.len() + r.name.len() + 1).max().unwrap_or(0);
        let fw = self.records.iter().map(|r| r.fixture.len()).max().unwrap_or(0);
        for r in &self.records {
            let mark = if r.as_expected() { "ok" } else { "MISMATCH" };
            let label = format!("{}/{}", r.suite, r.name);
            write!(f, "{:<w$}  {:<22}  {:<8}  {:<fw$}", label, r.status, mark, r.fixture, w = w, fw = fw)?;
            if r.runtime_ms > 0 {
                write!(f, "  {} ms", r.runtime_ms)?;
            }
            writeln!(f)?;
            if !r.as_expected() {
                writeln!(f, "    expected {}: {}", r.expected, r.claim)?;
                writeln!(f, "    {}", r.data)?;
            }
        }
        let ok = self.records.iter().filter(|r| r.as_expected()).count();
        write!(f, "{}/{} records as expected", ok, self.records.len())
    }
}
