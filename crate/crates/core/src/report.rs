//! Structured results: validation reports, verdicts, and solver transcripts.

use crate::field::{Field, Scalar};
use serde::{Deserialize, Serialize};
use std::fmt;

/// One named check with its outcome. `detail` explains a failure or records
/// what a passing check actually covered.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.failures().next()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{} {}", mark, c.name)?;
            } else {
                writeln!(f, "{} {}: {}", mark, c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

/// Machine-stable verdict strings for decision procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "SEPARABLE")]
    Separable,
    #[serde(rename = "NOT_SEPARABLE")]
    NotSeparable,
    #[serde(rename = "SPLIT")]
    Split,
    #[serde(rename = "NOT_SPLIT")]
    NotSplit,
    #[serde(rename = "THEOREM_SILENT")]
    TheoremSilent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Separable => "SEPARABLE",
            Verdict::NotSeparable => "NOT_SEPARABLE",
            Verdict::Split => "SPLIT",
            Verdict::NotSplit => "NOT_SPLIT",
            Verdict::TheoremSilent => "THEOREM_SILENT",
        };
        f.write_str(s)
    }
}

/// Rank bookkeeping for an infeasible linear system, together with a dual
/// witness `y` (`y^T A = 0`, `y^T b != 0`) so the refusal can be audited
/// without re-running the elimination.
#[derive(Debug, Clone)]
pub struct Infeasibility {
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub augmented_rank: usize,
    pub dual_witness: Vec<Scalar>,
    /// Human-readable names of the equations the witness combines.
    pub witness_rows: Vec<(String, Scalar)>,
}

impl Infeasibility {
    pub fn summary(&self) -> String {
        format!(
            "system of {} equations in {} unknowns has rank {} but augmented rank {}",
            self.equations, self.unknowns, self.rank, self.augmented_rank
        )
    }

    pub fn witness_summary(&self, field: &Field) -> String {
        let rows: Vec<String> = self
            .witness_rows
            .iter()
            .filter(|(_, c)| !field.is_zero(c))
            .map(|(name, c)| format!("{} * ({})", c.report_string(), name))
            .collect();
        format!(
            "dual witness: the combination {} of the constraints is identically zero on the left but nonzero on the right",
            rows.join(" + ")
        )
    }
}
