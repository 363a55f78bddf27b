//! Named pass/fail checks collected by the validators.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A list of checks; the verdict is the conjunction of all of them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, name: &str) {
        self.push(name, true, String::new());
    }

    pub fn fail(&mut self, name: &str, detail: impl Into<String>) {
        self.push(name, false, detail);
    }

    pub fn verdict(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.failures().next()
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{mark:>4} {}", c.name)?;
            } else {
                writeln!(f, "{mark:>4} {}: {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}
