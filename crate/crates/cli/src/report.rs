//! Run reports: one verdict per check, rendered as text or JSON.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Nothing found within the searched range.
    None,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: Verdict, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            verdict,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn with_witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub args: Vec<String>,
    pub checks: Vec<Check>,
    pub info: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit_code: i32,
}

pub const EXIT_VERIFIED: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

impl RunReport {
    pub fn new(command: &str, args: Vec<String>) -> Self {
        RunReport {
            command: command.to_string(),
            args,
            checks: Vec::new(),
            info: Vec::new(),
            error: None,
            exit_code: EXIT_VERIFIED,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.exit_code = self.derived_exit_code();
    }

    pub fn fail_input(mut self, message: impl Into<String>) -> Self {
        self.error = Some(message.into());
        self.exit_code = EXIT_INPUT;
        self
    }

    /// 2 on input error, 0 iff every verdict passed, 1 otherwise.
    pub fn derived_exit_code(&self) -> i32 {
        if self.error.is_some() {
            EXIT_INPUT
        } else if self.checks.iter().all(|c| c.verdict == Verdict::Pass) {
            EXIT_VERIFIED
        } else {
            EXIT_REFUTED
        }
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.verdict != Verdict::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "quadric {} {}", self.command, self.args.join(" "));
        if let Some(e) = &self.error {
            let _ = writeln!(out, "  error: {e}");
        }
        for (i, c) in self.checks.iter().enumerate() {
            let tag = match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::None => "none",
            };
            let _ = writeln!(out, "  {:>2}. [{tag}] {}", i + 1, c.name);
            for line in c.detail.lines() {
                let _ = writeln!(out, "        {line}");
            }
        }
        for line in &self.info {
            let _ = writeln!(out, "  note: {line}");
        }
        if self.error.is_none() {
            let summary = match self.first_failure() {
                None => format!("all {} checks verified", self.checks.len()),
                Some(c) => format!("first failing check: {}", c.name),
            };
            let _ = writeln!(out, "  {summary}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_follows_verdicts() {
        let mut r = RunReport::new("check", vec![]);
        assert_eq!(r.exit_code, 0);
        r.push(Check::new("a", Verdict::Pass, ""));
        assert_eq!(r.exit_code, 0);
        r.push(Check::new("b", Verdict::None, ""));
        assert_eq!(r.exit_code, 1);
        assert_eq!(r.first_failure().unwrap().name, "b");
        let r = r.fail_input("bad");
        assert_eq!(r.exit_code, 2);
    }

    #[test]
    fn json_round_trip() {
        let mut r = RunReport::new("jetdet", vec!["builtin".into()]);
        r.push(Check::new("x", Verdict::Fail, "d").with_witness(serde_json::json!({"c": [1, 2]})));
        r.info.push("note".into());
        let back: RunReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.derived_exit_code(), back.exit_code);
    }
}
