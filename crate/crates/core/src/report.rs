//! Structured results for every checker: a verdict plus a deterministic
//! list of findings, each locating the offending basis tuple and carrying
//! the symbolic difference.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Found,
    NotFound,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Pass | Verdict::Found => 0,
            Verdict::Fail | Verdict::NotFound => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Found => "found",
            Verdict::NotFound => "not-found",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

/// One failure site: which identity, on which basis tuple, with the
/// nonzero symbolic difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub locator: Vec<String>,
    pub difference: String,
}

impl Finding {
    pub fn new(locator: Vec<String>, difference: String) -> Self {
        Finding { locator, difference }
    }
}

/// Result of a single checker run. Findings are kept sorted by locator so
/// reports are deterministic regardless of evaluation order.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub check: String,
    pub findings: Vec<Finding>,
}

impl CheckReport {
    pub fn new(check: &str) -> Self {
        CheckReport { check: check.to_string(), findings: Vec::new() }
    }

    pub fn push(&mut self, locator: Vec<String>, difference: String) {
        self.findings.push(Finding::new(locator, difference));
    }

    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn verdict(&self) -> Verdict {
        if self.passed() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.findings.extend(other.findings);
    }

    /// Locators of all findings, for matching failure sites across
    /// independent checkers.
    pub fn locators(&self) -> Vec<Vec<String>> {
        self.findings.iter().map(|f| f.locator.clone()).collect()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.check, self.verdict())?;
        for finding in &self.findings {
            writeln!(f, "  at ({}): {}", finding.locator.join(", "), finding.difference)?;
        }
        Ok(())
    }
}
