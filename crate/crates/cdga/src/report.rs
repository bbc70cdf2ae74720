//! Structured axiom-check and verdict reports.

use crate::graded::Interval;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail { witness: String },
    /// The identity could not be evaluated on part of the data (truncation);
    /// what was evaluated passed.
    Skipped { reason: String },
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckItem {
    pub axiom: String,
    pub verdict: Verdict,
    /// Interval of degrees on which the identity was actually evaluated.
    pub window: Interval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub subject: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(subject: &str) -> Self {
        CheckReport { subject: subject.to_string(), items: Vec::new() }
    }

    pub fn push(&mut self, axiom: &str, verdict: Verdict, window: Interval) {
        self.items.push(CheckItem { axiom: axiom.to_string(), verdict, window });
    }

    pub fn passed(&self) -> bool {
        !self.items.iter().any(|i| i.verdict.is_fail())
    }

    pub fn failures(&self) -> Vec<&CheckItem> {
        self.items.iter().filter(|i| i.verdict.is_fail()).collect()
    }

    pub fn merge(&mut self, other: CheckReport) {
        for item in other.items {
            self.items.push(CheckItem {
                axiom: format!("{}: {}", other.subject, item.axiom),
                ..item
            });
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check {}", self.subject)?;
        for item in &self.items {
            let status = match &item.verdict {
                Verdict::Pass => "pass".to_string(),
                Verdict::Fail { witness } => format!("FAIL ({witness})"),
                Verdict::Skipped { reason } => format!("skipped ({reason})"),
            };
            writeln!(f, "  {:<40} {:>12}  {}", item.axiom, format!("{}", item.window), status)?;
        }
        Ok(())
    }
}
