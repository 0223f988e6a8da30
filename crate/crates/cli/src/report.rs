//! The machine-readable report and its JSON / text renderings.
//!
//! JSON goes through `serde_json::Value`, whose maps are ordered, so keys
//! come out sorted and identical inputs give byte-identical documents.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ringstab_core::classify::Status;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "ringstab-report/1";

/// One verified statement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub status: Status,
    /// Concrete counterexample (matrices in canonical encoding) for
    /// failures; a reason for unverified entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default)]
    pub details: serde_json::Value,
}

impl CheckResult {
    pub fn new(suite: &str, name: impl Into<String>, status: Status) -> Self {
        CheckResult {
            suite: suite.into(),
            name: name.into(),
            status,
            witness: None,
            details: serde_json::Value::Null,
        }
    }

    pub fn with_witness(mut self, witness: Option<String>) -> Self {
        self.witness = witness;
        self
    }

    pub fn with_details(mut self, details: impl Serialize) -> Self {
        self.details = serde_json::to_value(details).expect("serializable details");
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingReport {
    pub name: String,
    pub family: String,
    pub order: usize,
    pub n: usize,
    pub cap: usize,
    pub results: Vec<CheckResult>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub unverified: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub suite: String,
    pub seed: u64,
    pub rings: Vec<RingReport>,
    pub summary: Summary,
    pub status: Status,
    /// Wall-clock milliseconds per ring and suite; only with `--timings`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, u64>>,
}

impl Report {
    pub fn new(suite: &str, seed: u64) -> Self {
        Report {
            schema: SCHEMA.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            suite: suite.into(),
            seed,
            rings: Vec::new(),
            summary: Summary::default(),
            status: Status::Pass,
            timings: None,
        }
    }

    /// Recomputes `summary` and `status` from the results.
    pub fn finalize(&mut self) {
        let mut summary = Summary::default();
        for r in self.rings.iter().flat_map(|r| &r.results) {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Unverified => summary.unverified += 1,
            }
        }
        self.summary = summary;
        self.status = Status::all(self.rings.iter().flat_map(|r| &r.results).map(|r| r.status));
    }

    /// 0 when everything passed, 1 on any failure, 2 when the only
    /// shortfall is unverified entries.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Unverified => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn to_json(report: &Report) -> String {
    let value = serde_json::to_value(report).expect("report serializes");
    let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
    out.push('\n');
    out
}

pub fn from_json(text: &str) -> serde_json::Result<Report> {
    serde_json::from_str(text)
}

pub fn to_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "ringstab {} — suite {} (seed {})",
        report.tool_version, report.suite, report.seed
    );
    for ring in &report.rings {
        let _ = writeln!(
            out,
            "\n{} = {} (order {}, n = {}, cap = {})",
            ring.name, ring.family, ring.order, ring.n, ring.cap
        );
        for r in &ring.results {
            let _ = write!(out, "  [{:<10}] {}: {}", r.status.to_string(), r.suite, r.name);
            if let Some(w) = &r.witness {
                let _ = write!(out, " — {w}");
            }
            out.push('\n');
        }
    }
    let s = report.summary;
    let _ = writeln!(
        out,
        "\n{} passed, {} failed, {} unverified: {}",
        s.pass, s.fail, s.unverified, report.status
    );
    if let Some(t) = &report.timings {
        for (k, ms) in t {
            let _ = writeln!(out, "  {k}: {ms} ms");
        }
    }
    out
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Text => to_text(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid_json() {
        let mut r = Report::new("axioms", 0);
        r.finalize();
        let text = to_json(&r);
        assert_eq!(from_json(&text).unwrap(), r);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn exit_codes() {
        let mut r = Report::new("x", 0);
        r.rings.push(RingReport {
            name: "a".into(),
            family: "zmod(2)".into(),
            order: 2,
            n: 3,
            cap: 1,
            results: vec![CheckResult::new("x", "u", Status::Unverified)],
        });
        r.finalize();
        assert_eq!(r.exit_code(), 2);
        r.rings[0].results.push(CheckResult::new("x", "f", Status::Fail));
        r.finalize();
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.summary, Summary { pass: 0, fail: 1, unverified: 1 });
    }
}
