//! Verification suites and report plumbing behind the `petersson` binary.

pub mod suites;

use serde::Serialize;

use petersson_core::Error;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PRECISION: i32 = 3;
    pub const CAP: i32 = 4;
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Precision(_) => exit::PRECISION,
        Error::CapExhausted(_) => exit::CAP,
        Error::Invariant(_) => exit::FAIL,
        _ => exit::USAGE,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Number of individual comparisons behind this check.
    pub cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, cases: 0, counterexample: None, detail: None }
    }

    /// Record one comparison; only the first failure is kept.
    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            if self.passed {
                self.counterexample = Some(what());
            }
            self.passed = false;
        }
    }

    pub fn fail(&mut self, what: String) {
        self.record(false, || what);
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    /// An empty check has tested nothing and does not pass.
    fn settle(mut self) -> Self {
        if self.cases == 0 && self.passed {
            self.passed = false;
            self.counterexample = Some("no cases".into());
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: &str, checks: Vec<Check>) -> Self {
        let checks: Vec<Check> = checks.into_iter().map(Check::settle).collect();
        SuiteReport { suite: suite.into(), passed: checks.iter().all(|c| c.passed), checks }
    }

    pub fn merge(suite: &str, parts: Vec<SuiteReport>) -> Self {
        let checks = parts
            .into_iter()
            .flat_map(|p| {
                let s = p.suite;
                p.checks.into_iter().map(move |mut c| {
                    c.name = format!("{s}/{}", c.name);
                    c
                })
            })
            .collect();
        SuiteReport::new(suite, checks)
    }
}

/// Pretty JSON with object keys in sorted order.
pub fn to_sorted_json<T: Serialize>(v: &T) -> serde_json::Result<String> {
    // serde_json's Map is a BTreeMap unless preserve_order is enabled
    let value = serde_json::to_value(v)?;
    let mut s = serde_json::to_string_pretty(&value)?;
    s.push('\n');
    Ok(s)
}
