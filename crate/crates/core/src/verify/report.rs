use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Expected, informational outcome (e.g. the kernel of `Θ` at a
    /// degenerate `α`). Does not count as a failure.
    Flagged,
}

impl CheckStatus {
    pub fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Flagged => "FLAG",
        }
    }
}

/// Parameters a check was run with; absent fields do not apply.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub d: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub suite: String,
    pub params: CheckParams,
    /// Named residuals; `value` is the one compared against `tolerance`.
    pub residuals: BTreeMap<String, f64>,
    pub tolerance: f64,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, suite: impl Into<String>, d: f64) -> Self {
        CheckRecord {
            name: name.into(),
            suite: suite.into(),
            params: CheckParams { d, ..CheckParams::default() },
            residuals: BTreeMap::new(),
            tolerance: 0.0,
            status: CheckStatus::Pass,
            witness: None,
            note: None,
        }
    }

    pub fn alpha(mut self, alpha: f64) -> Self {
        self.params.alpha = Some(alpha);
        self
    }

    pub fn beta(mut self, beta: f64) -> Self {
        self.params.beta = Some(beta);
        self
    }

    pub fn n(mut self, n: usize) -> Self {
        self.params.n = Some(n);
        self
    }

    pub fn j_max(mut self, j_max: usize) -> Self {
        self.params.j_max = Some(j_max);
        self
    }

    pub fn epsilon(mut self, epsilon: f64) -> Self {
        self.params.epsilon = Some(epsilon);
        self
    }

    pub fn residual(mut self, key: &str, value: f64) -> Self {
        self.residuals.insert(key.to_string(), value);
        self
    }

    pub fn tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Sets the status; a failing record keeps `witness`.
    pub fn judge(mut self, passed: bool, witness: impl FnOnce() -> String) -> Self {
        if passed {
            self.status = CheckStatus::Pass;
        } else {
            self.status = CheckStatus::Fail;
            self.witness = Some(witness());
        }
        self
    }

    pub fn flagged(mut self, witness: impl Into<String>) -> Self {
        self.status = CheckStatus::Flagged;
        self.witness = Some(witness.into());
        self
    }

    /// Failure caused by an error in the check itself.
    pub fn errored(mut self, err: impl std::fmt::Display) -> Self {
        self.status = CheckStatus::Fail;
        self.witness = Some(format!("error: {err}"));
        self
    }

    /// Headline residual: `value` if present, otherwise the largest entry.
    pub fn headline(&self) -> Option<f64> {
        self.residuals.get("value").copied().or_else(|| self.residuals.values().copied().reduce(f64::max))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub flagged: usize,
    pub seed: u64,
    pub all_passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
    pub summary: ReportSummary,
    /// Seconds since the Unix epoch; the only non-deterministic field.
    pub generated_at: u64,
}

impl VerificationReport {
    pub fn new(checks: Vec<CheckRecord>, seed: u64) -> Self {
        let count = |s| checks.iter().filter(|c| c.status == s).count();
        let (passed, failed, flagged) =
            (count(CheckStatus::Pass), count(CheckStatus::Fail), count(CheckStatus::Flagged));
        let generated_at =
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|t| t.as_secs()).unwrap_or(0);
        VerificationReport {
            summary: ReportSummary { total: checks.len(), passed, failed, flagged, seed, all_passed: failed == 0 },
            checks,
            generated_at,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.all_passed
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, self)?;
        Ok(())
    }

    pub fn to_text_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
        let mut out = String::new();
        let _ =
            writeln!(out, "{:<6} {:<10} {:<width$} {:>12} {:>10}", "status", "suite", "check", "residual", "tolerance");
        for c in &self.checks {
            let residual = c.headline().map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"));
            let _ = writeln!(
                out,
                "{:<6} {:<10} {:<width$} {:>12} {:>10.1e}",
                c.status.label(),
                c.suite,
                c.name,
                residual,
                c.tolerance
            );
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} checks: {} passed, {} failed, {} flagged (seed {})",
            s.total, s.passed, s.failed, s.flagged, s.seed
        );
        out
    }
}
