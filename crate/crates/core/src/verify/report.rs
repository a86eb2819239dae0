//! Machine-readable and text reports.

use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use super::certificate::Certificate;
use super::config::{RawConfig, SuiteConfig, SuiteName};
use super::suites::{Check, SuiteOutcome};

pub const REPORT_VERSION: &str = "1";

/// Keys carrying wall-clock measurements; everything else is a function of
/// the configuration and seed.
pub const TIMING_KEYS: [&str; 2] = ["elapsed_ms", "total_elapsed_ms"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: SuiteName,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub witnesses: Vec<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificate: Vec<Certificate>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub unverifiable: Vec<String>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn new(name: SuiteName, outcome: SuiteOutcome, elapsed: Duration) -> Self {
        SuiteReport {
            name,
            verdict: if outcome.passed() { Verdict::Pass } else { Verdict::Fail },
            checks: outcome.checks,
            witnesses: outcome.witnesses,
            certificate: outcome.certificates,
            unverifiable: outcome.unverifiable,
            elapsed_ms: elapsed.as_millis() as u64,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub config_echo: RawConfig,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
    pub total_elapsed_ms: u64,
}

impl Report {
    pub fn new(cfg: &SuiteConfig, suites: Vec<SuiteReport>, elapsed: Duration) -> Self {
        Report {
            version: REPORT_VERSION,
            config_echo: cfg.raw.clone(),
            passed: suites.iter().all(|s| s.verdict == Verdict::Pass),
            suites,
            total_elapsed_ms: elapsed.as_millis() as u64,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for suite in &self.suites {
            let passed = suite.checks.iter().filter(|c| c.passed).count();
            let verdict = if suite.verdict == Verdict::Pass { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{verdict} {} ({passed}/{} checks)", suite.name, suite.checks.len());
            for c in suite.checks.iter().filter(|c| !c.passed) {
                let _ = writeln!(s, "  failed: {}{}", c.name, c.detail.as_ref().map_or(String::new(), |d| format!(" ({d})")));
            }
            for u in &suite.unverifiable {
                let _ = writeln!(s, "  unverifiable: {u}");
            }
        }
        let _ = writeln!(s, "{}", if self.passed { "all suites passed" } else { "some suites failed" });
        s
    }
}

/// Drops every timing key, recursively.
pub fn strip_timing(mut v: Value) -> Value {
    fn walk(v: &mut Value) {
        match v {
            Value::Object(map) => {
                for k in TIMING_KEYS {
                    map.remove(k);
                }
                map.values_mut().for_each(walk);
            }
            Value::Array(items) => items.iter_mut().for_each(walk),
            _ => {}
        }
    }
    walk(&mut v);
    v
}
