use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    pub location: String,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Derived {
    pub name: String,
    pub value: String,
}

/// Outcome of one named verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub check: String,
    pub subject: String,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derived: Vec<Derived>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub elapsed_ms: u64,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, subject: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            subject: subject.into(),
            status: Status::Pass,
            witnesses: Vec::new(),
            derived: Vec::new(),
            notes: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Records a failure witness and marks the report failed.
    pub fn fail(&mut self, location: impl Into<String>, residual: impl Into<String>) {
        self.status = Status::Fail;
        self.witnesses.push(Witness {
            location: location.into(),
            residual: residual.into(),
        });
    }

    pub fn derive(&mut self, name: impl Into<String>, value: impl Into<String>) {
        self.derived.push(Derived {
            name: name.into(),
            value: value.into(),
        });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Folds another report's outcome into this one, prefixing its witness
    /// locations.
    pub fn absorb(&mut self, other: CheckReport) {
        if !other.passed() {
            self.status = Status::Fail;
        }
        for w in other.witnesses {
            self.witnesses.push(Witness {
                location: format!("{}: {}", other.check, w.location),
                residual: w.residual,
            });
        }
        self.derived.extend(other.derived);
        self.notes.extend(other.notes);
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_millis() as u64;
        self
    }

    pub fn summary_line(&self) -> String {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        format!("{status} {} [{}] ({} ms)", self.check, self.subject, self.elapsed_ms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let mut r = CheckReport::new("qybe", "R_Gmk");
        r.fail("(1,2)", "m");
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["status"], "fail");
        assert_eq!(v["witnesses"][0]["location"], "(1,2)");
        assert!(v.get("derived").is_none());
        let back: CheckReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
