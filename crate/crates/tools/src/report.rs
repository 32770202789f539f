//! Run reports: a human-readable rendering and a deterministic machine
//! JSON channel.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::format::InputError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// Passed on a truncated model; nothing failed, nothing was proved
    /// beyond the truncation.
    Partial,
}

impl Outcome {
    pub fn of(passed: bool) -> Self {
        if passed {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Partial => "PARTIAL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub checks: Vec<Check>,
    pub results: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<InputError>,
    /// Wall-clock per stage; shown to humans, never serialized.
    #[serde(skip)]
    pub timing: Vec<(String, Duration)>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        Self { command, inputs: Vec::new(), checks: Vec::new(), results: BTreeMap::new(), error: None, timing: Vec::new() }
    }

    /// Reads a file and records its digest.
    pub fn read_input(&mut self, path: &str) -> Result<String, InputError> {
        let bytes = std::fs::read(path).map_err(|e| InputError::new(path, "file", e))?;
        self.inputs.push(InputDigest { path: path.into(), sha256: hex::encode(Sha256::digest(&bytes)) });
        String::from_utf8(bytes).map_err(|e| InputError::new(path, format!("byte {}", e.utf8_error().valid_up_to()), "not UTF-8"))
    }

    pub fn check(&mut self, name: &str, outcome: Outcome, detail: impl Into<String>, witness: Option<Value>) {
        self.checks.push(Check { name: name.into(), outcome, detail: detail.into(), witness });
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.into(), serde_json::to_value(value).expect("plain data"));
    }

    /// Records the wall-clock time of `stage` since `start`.
    pub fn lap(&mut self, stage: &str, start: Instant) {
        self.timing.push((stage.into(), start.elapsed()));
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.outcome == Outcome::Fail)
    }

    /// 2 on input errors, 1 when a check failed, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            2
        } else if self.failed() {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "$ {}", self.command.join(" "));
        for i in &self.inputs {
            let _ = writeln!(out, "input {} (sha256 {})", i.path, &i.sha256[..16]);
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "input error: {e}");
        }
        for c in &self.checks {
            let _ = writeln!(out, "[{}] {}: {}", c.outcome.label(), c.name, c.detail);
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "    witness: {w}");
            }
        }
        for (k, v) in &self.results {
            let _ = writeln!(out, "{k}: {v}");
        }
        if !self.timing.is_empty() {
            let parts: Vec<String> = self.timing.iter().map(|(s, d)| format!("{s} {:.1?}", d)).collect();
            let _ = writeln!(out, "timing: {}", parts.join(", "));
        }
        out
    }
}
