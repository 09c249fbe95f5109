//! Machine-readable verification reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::integral::{FormulaCheck, MCEstimate};
use crate::rational::format_rational;

/// MC checks pass when `|estimate − rhs| ≤ Z_TOLERANCE · stderr`.
pub const Z_TOLERANCE: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Exact { lhs: String, rhs: String, equal: bool },
    MonteCarlo { estimate: f64, stderr: f64, z: f64, rhs: String },
    Property { holds: bool, detail: String },
    Skipped { reason: String },
}

impl Outcome {
    pub fn exact(check: &FormulaCheck) -> Self {
        Outcome::Exact {
            lhs: format_rational(&check.lhs),
            rhs: format_rational(&check.rhs),
            equal: check.holds(),
        }
    }

    pub fn monte_carlo(est: &MCEstimate) -> Self {
        Outcome::MonteCarlo {
            estimate: est.estimate,
            stderr: est.standard_error,
            z: est.z_score(),
            rhs: format_rational(&est.exact_rhs),
        }
    }

    pub fn property(holds: bool, detail: impl Into<String>) -> Self {
        Outcome::Property {
            holds,
            detail: detail.into(),
        }
    }

    pub fn passed(&self) -> bool {
        match self {
            Outcome::Exact { equal, .. } => *equal,
            Outcome::MonteCarlo { z, .. } => z.abs() <= Z_TOLERANCE,
            Outcome::Property { holds, .. } => *holds,
            Outcome::Skipped { .. } => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    pub instance: usize,
    pub dimension: usize,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub failures: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub seed: u64,
    pub runtime_ms: u128,
    pub pass: bool,
    pub summary: Summary,
    pub records: Vec<Record>,
}

/// Hex SHA-256 of the canonical JSON of `inputs`.
pub fn digest<T: Serialize>(inputs: &T) -> String {
    let bytes = serde_json::to_vec(inputs).expect("inputs serialize");
    hex::encode(Sha256::digest(&bytes))
}

impl Report {
    pub fn new<T: Serialize>(command: &str, inputs: &T, seed: u64, records: Vec<Record>, runtime_ms: u128) -> Self {
        let mut summary = Summary::default();
        for r in &records {
            match r.outcome {
                Outcome::Skipped { .. } => summary.skipped += 1,
                _ => {
                    summary.checks += 1;
                    if !r.outcome.passed() {
                        summary.failures += 1;
                    }
                }
            }
        }
        Self {
            command: command.to_string(),
            inputs_digest: digest(inputs),
            seed,
            runtime_ms,
            pass: summary.failures == 0,
            summary,
            records,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.outcome.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Per-check-name table followed by every failing record.
    pub fn render_text(&self) -> String {
        let mut by_name: BTreeMap<&str, (usize, usize, usize)> = BTreeMap::new();
        for r in &self.records {
            let e = by_name.entry(&r.name).or_default();
            match r.outcome {
                Outcome::Skipped { .. } => e.2 += 1,
                _ => {
                    e.0 += 1;
                    if !r.outcome.passed() {
                        e.1 += 1;
                    }
                }
            }
        }
        let width = by_name.keys().map(|k| k.len()).max().unwrap_or(5).max(5);
        let mut out = String::new();
        let _ = writeln!(out, "{} seed={} digest={}", self.command, self.seed, &self.inputs_digest[..16]);
        let _ = writeln!(out, "{:width$}  {:>7}  {:>8}  {:>7}", "check", "checks", "failures", "skipped");
        for (name, (checks, failures, skipped)) in &by_name {
            let _ = writeln!(out, "{name:width$}  {checks:>7}  {failures:>8}  {skipped:>7}");
        }
        for r in self.failures() {
            let _ = writeln!(out, "FAIL {} instance={} n={}: {}", r.name, r.instance, r.dimension, describe(&r.outcome));
        }
        let _ = writeln!(
            out,
            "{}: {} checks, {} failures, {} skipped, {} ms",
            if self.pass { "PASS" } else { "FAIL" },
            self.summary.checks,
            self.summary.failures,
            self.summary.skipped,
            self.runtime_ms
        );
        out
    }
}

pub fn describe(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Exact { lhs, rhs, equal } => format!("lhs={lhs} rhs={rhs} equal={equal}"),
        Outcome::MonteCarlo { estimate, stderr, z, rhs } => {
            format!("estimate={estimate:.6} stderr={stderr:.6} z={z:.3} rhs={rhs}")
        }
        Outcome::Property { holds, detail } => format!("holds={holds} {detail}"),
        Outcome::Skipped { reason } => format!("skipped: {reason}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn record(outcome: Outcome) -> Record {
        Record {
            name: "x".into(),
            instance: 0,
            dimension: 2,
            outcome,
        }
    }

    #[test]
    fn pass_rules() {
        let ok = Outcome::exact(&FormulaCheck { lhs: rat(1), rhs: rat(1) });
        let bad = Outcome::exact(&FormulaCheck { lhs: rat(1), rhs: rat(2) });
        let skip = Outcome::Skipped { reason: "pre".into() };
        let r = Report::new("t", &1, 0, vec![record(ok.clone()), record(skip)], 0);
        assert!(r.pass);
        assert_eq!(r.summary, Summary { checks: 1, failures: 0, skipped: 1 });
        let r = Report::new("t", &1, 0, vec![record(ok), record(bad)], 0);
        assert!(!r.pass);
        assert_eq!(r.failures().count(), 1);
        let mc = Outcome::MonteCarlo { estimate: 1.0, stderr: 0.1, z: 4.5, rhs: "0".into() };
        assert!(!mc.passed());
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest(&("a", 1)), digest(&("a", 1)));
        assert_ne!(digest(&("a", 1)), digest(&("a", 2)));
        assert_eq!(digest(&1).len(), 64);
    }
}
