//! Run reports: observables plus a verdict for every numeric claim.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// How a value is compared against its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    Below,
    Above,
    /// A boolean property; `value` is 1 when it holds.
    Holds,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: Option<f64>,
    pub comparison: Comparison,
    pub passed: bool,
}

impl Check {
    /// Passes when `value < tolerance`.
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: Some(tolerance),
            comparison: Comparison::Below,
            passed: value < tolerance,
        }
    }

    /// Passes when `value > tolerance`.
    pub fn above(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: Some(tolerance),
            comparison: Comparison::Above,
            passed: value > tolerance,
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            tolerance: None,
            comparison: Comparison::Holds,
            passed: ok,
        }
    }
}

/// Everything a scenario or verification run produced, minus wall time.
///
/// Wall time is kept out so that reports from identical inputs are
/// byte-identical; the runner stores it separately.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub experiment: String,
    pub config: BTreeMap<String, String>,
    pub observables: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(experiment: impl Into<String>, config: BTreeMap<String, String>) -> Self {
        Self {
            experiment: experiment.into(),
            config,
            observables: BTreeMap::new(),
            checks: Vec::new(),
            warnings: Vec::new(),
            passed: true,
        }
    }

    pub fn observe(&mut self, key: impl Into<String>, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.observables.insert(key.into(), v);
    }

    pub fn check(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    /// Folds another report's checks and warnings in, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: RunReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}: {}", c.name);
            self.check(c);
        }
        for w in other.warnings {
            self.warn(format!("{prefix}: {w}"));
        }
        for (k, v) in other.observables {
            self.observables.insert(format!("{prefix}.{k}"), v);
        }
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values serialize");
        s.push('\n');
        s
    }
}
