use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    SkewHermitian,
    QuadraticRelation,
    Cocycle,
    SelfHomotopy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: Check,
    pub at: String,
    pub message: String,
}

/// Outcome of a consistency check; empty means consistent. Validation never
/// fails, it only reports.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, check: Check, at: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation { check, at: at.into(), message: message.into() });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "consistent": self.is_consistent(),
            "violations": self.violations,
        })
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_consistent() {
            return f.write_str("consistent");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{:?} at {}: {}", v.check, v.at, v.message)?;
        }
        Ok(())
    }
}
