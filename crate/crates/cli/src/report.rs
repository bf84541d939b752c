use crate::checks::{CheckResult, Outcome};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub fixture: String,
    pub kind: String,
    pub dim: Option<usize>,
    pub seed: u64,
    /// Set when the fixture could not be built.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub fixture: String,
    pub check: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub toolkit_version: String,
    pub seed: u64,
    pub tol: f64,
    pub fixtures: Vec<FixtureReport>,
    pub mismatches: Vec<Mismatch>,
}

impl Report {
    pub fn new(seed: u64, tol: f64, fixtures: Vec<FixtureReport>) -> Self {
        let mismatches = fixtures
            .iter()
            .flat_map(|f| {
                f.checks.iter().filter(|c| c.mismatched()).map(|c| Mismatch {
                    fixture: f.fixture.clone(),
                    check: c.check.to_string(),
                    expected: c.expected.map(|e| e.to_string()).unwrap_or_default(),
                    got: c.outcome.to_string(),
                })
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            toolkit_version: env!("CARGO_PKG_VERSION").into(),
            seed,
            tol,
            fixtures,
            mismatches,
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "conelab {} seed={} tol={:e}", self.toolkit_version, self.seed, self.tol);
        for f in &self.fixtures {
            let _ = write!(s, "\n{} [{}", f.fixture, f.kind);
            if let Some(d) = f.dim {
                let _ = write!(s, ", dim {d}");
            }
            let _ = writeln!(s, "]");
            if let Some(e) = &f.error {
                let _ = writeln!(s, "  error: {e}");
            }
            for c in &f.checks {
                let mark = if c.mismatched() { "MISMATCH" } else { "" };
                let exp = c.expected.map(|e| format!("(expected {e})")).unwrap_or_default();
                let _ = write!(s, "  {:<30} {:<13}{exp:<23}{mark}", c.check.name(), c.outcome.to_string());
                let detail = c.verdict.as_ref().and_then(|v| v.notes.first().cloned()).or_else(|| c.notice.clone());
                if let Some(d) = detail {
                    if c.outcome != Outcome::Holds || c.verdict.is_none() {
                        let _ = write!(s, "  {d}");
                    }
                }
                s = s.trim_end().to_string();
                s.push('\n');
            }
        }
        let _ = writeln!(s);
        if self.mismatches.is_empty() {
            let _ = writeln!(s, "all expectations met ({} fixtures)", self.fixtures.len());
        } else {
            let _ = writeln!(s, "{} mismatch(es):", self.mismatches.len());
            for m in &self.mismatches {
                let _ = writeln!(s, "  {}: {} expected {}, got {}", m.fixture, m.check, m.expected, m.got);
            }
        }
        s
    }
}
