//! Run reports: one pass/fail/error line per check, serializable for
//! golden-file use.
//!
//! The JSON form deliberately omits wall-clock timing so identical seeds
//! produce byte-identical reports; elapsed time goes to the human output
//! only.

use std::collections::BTreeMap;

use lambdak_core::verify::{CheckResult, CheckStatus};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<CheckResult>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport { command: command.into(), parameters: BTreeMap::new(), checks: Vec::new() }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }

    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    pub fn push_bool(&mut self, name: &str, ok: bool, witness: Option<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            witness: if ok { None } else { witness },
        });
    }

    pub fn push_info(&mut self, name: &str, value: impl ToString) {
        self.parameters.insert(name.into(), value.to_string());
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable rendering with one line per check.
    pub fn render_text(&self, elapsed_ms: u128) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        for (k, v) in &self.parameters {
            out.push_str(&format!("  {}: {}\n", k, v));
        }
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Error => "ERROR",
            };
            match &c.witness {
                Some(w) => out.push_str(&format!("{} {} ({})\n", tag, c.name, w)),
                None => out.push_str(&format!("{} {}\n", tag, c.name)),
            }
        }
        let passed = self.checks.iter().filter(|c| c.status == CheckStatus::Pass).count();
        out.push_str(&format!(
            "{}/{} checks passed in {} ms\n",
            passed,
            self.checks.len(),
            elapsed_ms
        ));
        out
    }
}
