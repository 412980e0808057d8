//! Machine-readable check reports. Exact values are strings; rationals
//! render as `p/q`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CheckFailure, Error};
use crate::structures::Clause;

pub const TOOL: &str = "nilgeo";
pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub value: String,
}

/// A floating-point value, reproducible from `seed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Approx {
    pub value: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx: Option<Approx>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, passed: bool, verdict: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed,
            verdict: verdict.into(),
            witnesses: Vec::new(),
            values: BTreeMap::new(),
            approx: None,
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Self::new(name, true, "pass")
    }

    pub fn from_clause(c: &Clause) -> Self {
        let mut r = Self::new(
            c.name.clone(),
            c.passed,
            if c.passed { "pass" } else { "fail" },
        );
        r.witnesses = c
            .witness
            .iter()
            .map(|(n, v)| Witness {
                name: n.clone(),
                value: v.clone(),
            })
            .collect();
        r
    }

    pub fn from_failure(f: &CheckFailure) -> Self {
        let mut r = Self::new(f.clause.clone(), false, f.kind.to_string());
        r.witnesses = f
            .witness
            .iter()
            .map(|(n, v)| Witness {
                name: n.clone(),
                value: v.clone(),
            })
            .collect();
        r
    }

    pub fn value(mut self, key: impl Into<String>, v: impl fmt::Display) -> Self {
        self.values.insert(key.into(), v.to_string());
        self
    }

    pub fn witness(mut self, name: impl Into<String>, v: impl fmt::Display) -> Self {
        self.witnesses.push(Witness {
            name: name.into(),
            value: v.to_string(),
        });
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub schema: String,
    pub command: String,
    pub input: BTreeMap<String, String>,
    pub checks: Vec<CheckResult>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, input: BTreeMap<String, String>) -> Self {
        Report {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            schema: SCHEMA_VERSION.into(),
            command: command.into(),
            input,
            checks: Vec::new(),
            status: Status::Pass,
            error: None,
        }
    }

    pub fn push(&mut self, c: CheckResult) {
        if !c.passed && self.status == Status::Pass {
            self.status = Status::Fail;
        }
        self.checks.push(c);
    }

    pub fn extend_clauses<'a>(&mut self, clauses: impl IntoIterator<Item = &'a Clause>) {
        for c in clauses {
            self.push(CheckResult::from_clause(c));
        }
    }

    /// Geometric failures become failing checks; anything else marks the
    /// report as an input error.
    pub fn record_error(&mut self, e: &Error) {
        match e {
            Error::Check(f) => self.push(CheckResult::from_failure(f)),
            other => {
                self.status = Status::Error;
                self.error = Some(other.to_string());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.command, self.status_word())?;
        for c in &self.checks {
            write!(f, "  [{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name)?;
            if c.verdict != "pass" && c.verdict != "fail" {
                write!(f, ": {}", c.verdict)?;
            }
            writeln!(f)?;
            for w in &c.witnesses {
                writeln!(f, "      {} = {}", w.name, w.value)?;
            }
            for (k, v) in &c.values {
                writeln!(f, "      {k} = {v}")?;
            }
            if let Some(a) = &c.approx {
                writeln!(f, "      approx {} (seed {})", a.value, a.seed)?;
            }
        }
        if let Some(e) = &self.error {
            writeln!(f, "  error: {e}")?;
        }
        Ok(())
    }
}

impl Report {
    fn status_word(&self) -> &'static str {
        match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::FailureKind;

    #[test]
    fn status_and_round_trip() {
        let mut r = Report::new(
            "betti",
            BTreeMap::from([("algebra".into(), "(0,0,12)".into())]),
        );
        r.push(CheckResult::pass("betti").value("b", "(1, 2, 2, 1)"));
        assert_eq!(r.exit_code(), 0);
        r.record_error(&Error::Check(
            CheckFailure::new(FailureKind::NotCcy, "d eps = 0").with("d eps", "e123"),
        ));
        assert_eq!(r.exit_code(), 1);
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
        r.record_error(&Error::Invalid("x".into()));
        assert_eq!(r.exit_code(), 2);
        assert!(r.to_json().contains("\"status\": \"error\""));
    }
}
