use std::fmt::{self, Write as _};
use std::io::Write;
use std::str::FromStr;
use std::time::Duration;

use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    TruncationInconclusive,
    BudgetExceeded,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::TruncationInconclusive => "truncation-inconclusive",
            Status::BudgetExceeded => "budget-exceeded",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One line of a report. `witness` holds set and rational literals that an
/// outside checker can re-add, or the exhausted budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub witness: String,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    /// One-line renderings of the monoid specs the checks ran on.
    pub specs: Vec<String>,
    pub checks: Vec<Check>,
    pub budget_limit: u64,
    pub seed: u64,
    pub elapsed: Option<Duration>,
}

impl Report {
    pub fn nodes_used(&self) -> u64 {
        self.checks
            .iter()
            .map(|c| c.nodes)
            .fold(0, u64::saturating_add)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    /// 0 when every check passes, 1 on any failure, otherwise 3.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else if self.count(Status::Fail) > 0 {
            1
        } else {
            3
        }
    }

    fn summary(&self) -> Value {
        json!({
            "pass": self.count(Status::Pass),
            "fail": self.count(Status::Fail),
            "truncation-inconclusive": self.count(Status::TruncationInconclusive),
            "budget-exceeded": self.count(Status::BudgetExceeded),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "suite: {}", self.suite);
        for s in &self.specs {
            let _ = writeln!(out, "spec: {s}");
        }
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(
            out,
            "budget: {} nodes per query, {} used",
            self.budget_limit,
            self.nodes_used()
        );
        if let Some(e) = self.elapsed {
            let _ = writeln!(out, "elapsed: {} ms", e.as_millis());
        }
        let id_w = self
            .checks
            .iter()
            .map(|c| c.id.len())
            .max()
            .unwrap_or(2)
            .max(5);
        let _ = writeln!(
            out,
            "{:<23}  {:<id_w$}  {:>10}  witness",
            "status", "check", "nodes"
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<23}  {:<id_w$}  {:>10}  {}",
                c.status.name(),
                c.id,
                c.nodes,
                c.witness
            );
        }
        let _ = writeln!(
            out,
            "summary: {} pass, {} fail, {} truncation-inconclusive, {} budget-exceeded",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::TruncationInconclusive),
            self.count(Status::BudgetExceeded)
        );
        out
    }

    /// A header line followed by one line per check. Keys are sorted.
    pub fn to_json_lines(&self) -> String {
        let mut header = json!({
            "type": "report",
            "suite": self.suite,
            "specs": self.specs,
            "seed": self.seed,
            "budget_limit": self.budget_limit,
            "budget_used": self.nodes_used(),
            "summary": self.summary(),
        });
        if let Some(e) = self.elapsed {
            header["elapsed_ms"] = json!(e.as_millis() as u64);
        }
        let mut out = header.to_string();
        out.push('\n');
        for c in &self.checks {
            let line = json!({
                "type": "check",
                "id": c.id,
                "status": c.status.name(),
                "witness": c.witness,
                "nodes": c.nodes,
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::JsonLines => self.to_json_lines(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    JsonLines,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json-lines" | "jsonl" => Ok(Format::JsonLines),
            _ => Err(Error::invalid(format!(
                "unknown format `{s}` (text or json-lines)"
            ))),
        }
    }
}

/// Writes the report to `path`, or to standard output for `-`.
pub fn emit_report(report: &Report, path: &str, format: Format) -> Result<()> {
    let text = report.render(format);
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
    } else {
        std::fs::write(path, text)?;
    }
    Ok(())
}
