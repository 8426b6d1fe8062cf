//! Named verification suites and their reports.

mod report;
mod sample;
mod suites;

use std::time::Instant;

use rayon::prelude::*;

pub use report::{emit_report, Check, Format, Report, Status};
pub use suites::SUITES;

use crate::arith::Rat;
use crate::budget::{Budget, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::monoid::MonoidSpec;

/// Knobs shared by every suite. `None` means the suite's own default.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Replaces the default monoids of suites that work on any rank-1 spec,
    /// or sets the depth of the family suites when it names their family.
    pub spec: Option<MonoidSpec>,
    /// Node allowance for each individual query.
    pub budget: u64,
    pub depth: Option<u32>,
    pub bound: Option<Rat>,
    pub seed: u64,
    /// Record wall time in the report. Off by default so that repeated
    /// runs serialize identically.
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            spec: None,
            budget: DEFAULT_BUDGET,
            depth: None,
            bound: None,
            seed: 0,
            timings: false,
        }
    }
}

/// Runs one suite, or every suite for `"all"`. Suites run in parallel on
/// the current rayon pool; checks inside a suite run in order, so the
/// report does not depend on the number of workers.
pub fn run_verify_suite(name: &str, opts: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let names: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&name) {
        vec![name]
    } else {
        return Err(Error::invalid(format!(
            "unknown suite `{name}` (expected one of {}, all)",
            SUITES.join(", ")
        )));
    };
    let parts: Vec<Result<suites::SuiteRun>> =
        names.par_iter().map(|n| suites::run(n, opts)).collect();
    let mut report = Report {
        suite: name.to_string(),
        specs: Vec::new(),
        checks: Vec::new(),
        budget_limit: opts.budget,
        seed: opts.seed,
        elapsed: None,
    };
    for part in parts {
        let part = part?;
        for s in part.specs {
            if !report.specs.contains(&s) {
                report.specs.push(s);
            }
        }
        report.checks.extend(part.checks);
    }
    if opts.timings {
        report.elapsed = Some(start.elapsed());
    }
    Ok(report)
}

/// Meters a check: each query gets a fresh budget, and the nodes it used
/// are added to the check's total whether or not it succeeded.
pub(crate) struct Meter {
    limit: u64,
    used: u64,
}

impl Meter {
    pub(crate) fn new(limit: u64) -> Self {
        Meter { limit, used: 0 }
    }

    pub(crate) fn run<T>(&mut self, f: impl FnOnce(&mut Budget) -> Result<T>) -> Result<T> {
        let mut b = Budget::new(self.limit);
        let out = f(&mut b);
        self.used = self.used.saturating_add(b.used().min(self.limit));
        out
    }
}
