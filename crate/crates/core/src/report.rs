//! Pass reports shared by the validators.
//!
//! Failures are reported through each module's error type; a report is what a
//! validator returns when every check passed, listing what was checked.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Passed,
    /// The condition is topological and holds automatically for finite discrete spaces.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        Self { subject: subject.into(), checks: Vec::new(), max_deviation: None }
    }

    pub fn passed(&mut self, name: impl Into<String>) -> &mut Self {
        self.checks.push(Check { name: name.into(), outcome: Outcome::Passed, detail: None });
        self
    }

    pub fn passed_with(&mut self, name: impl Into<String>, detail: impl Into<String>) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            outcome: Outcome::Passed,
            detail: Some(detail.into()),
        });
        self
    }

    pub fn vacuous(&mut self, name: impl Into<String>, detail: impl Into<String>) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            outcome: Outcome::Vacuous,
            detail: Some(detail.into()),
        });
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Machine-readable error codes for the command-line front end.
pub trait ErrorCode {
    fn code(&self) -> &'static str;

    /// True when the failure comes from a numerical tolerance band rather than
    /// from the input violating a definition.
    fn is_ambiguity(&self) -> bool {
        false
    }
}
