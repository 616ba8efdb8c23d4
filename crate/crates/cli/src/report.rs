//! Report records and their JSON / CSV forms.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{ConfigEcho, Format};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "evidence-pass")]
    EvidencePass,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::EvidencePass => "evidence-pass",
        }
    }
}

/// Integer counters or exact rationals as `p/q` text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Counter {
    Int(i64),
    Text(String),
}

impl std::fmt::Display for Counter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Counter::Int(i) => write!(f, "{i}"),
            Counter::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub name: String,
    pub status: Status,
    pub counters: BTreeMap<String, Counter>,
    pub time_ms: Option<u64>,
    pub log_digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub config: ConfigEcho,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.suites.iter().any(|s| s.status == Status::Fail)
    }

    /// Pretty JSON with every object's keys sorted.
    pub fn to_json(&self) -> Result<String, CliError> {
        // serde_json's default map is ordered, so a round trip through Value sorts keys.
        let value = serde_json::to_value(self)?;
        let mut s = serde_json::to_string_pretty(&value)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(s)?)
    }

    /// One row per suite: name, status, counters as `key=value;...`, timeMs, logDigest.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "status", "counters", "timeMs", "logDigest"])?;
        for s in &self.suites {
            let counters = s.counters.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
            let time = s.time_ms.map(|t| t.to_string()).unwrap_or_default();
            w.write_record([s.name.as_str(), s.status.as_str(), &counters, &time, &s.log_digest])?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Writes the report to `path`, or to stdout when `path` is `None`.
pub fn emit_report(report: &Report, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let text = report.render(format)?;
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Hex SHA-256 of the log lines joined by newlines.
pub fn log_digest(lines: &[String]) -> String {
    let mut h = Sha256::new();
    for l in lines {
        h.update(l.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}
