//! Machine-readable pass/fail records for every verification the crate runs.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// One named check: what was expected, what was observed, and, on failure,
/// a concrete witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub paper_ref: String,
    pub expected: Value,
    pub observed: Value,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        paper_ref: impl Into<String>,
        expected: impl Serialize,
        observed: impl Serialize,
        pass: bool,
    ) -> Self {
        Check {
            name: name.into(),
            paper_ref: paper_ref.into(),
            expected: to_value(expected),
            observed: to_value(observed),
            pass,
            witness: None,
        }
    }

    /// Passes iff `expected == observed`.
    pub fn equal<T: Serialize + PartialEq>(
        name: impl Into<String>,
        paper_ref: impl Into<String>,
        expected: T,
        observed: T,
    ) -> Self {
        let pass = expected == observed;
        Check::new(name, paper_ref, expected, observed, pass)
    }

    pub fn with_witness(mut self, witness: impl Serialize) -> Self {
        self.witness = Some(to_value(witness));
        self
    }

    /// Attaches the witness only when the check failed.
    pub fn witness_if_failed(self, witness: Option<impl Serialize>) -> Self {
        match (self.pass, witness) {
            (false, Some(w)) => self.with_witness(w),
            _ => self,
        }
    }
}

/// A list of checks about one subject. The top-level `pass` is the
/// conjunction of the checks; an empty certificate passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    subject: String,
    pass: bool,
    checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    metadata: Map<String, Value>,
}

impl Certificate {
    pub fn new(subject: impl Into<String>) -> Self {
        Certificate { subject: subject.into(), pass: true, checks: Vec::new(), metadata: Map::new() }
    }

    pub fn subject(&self) -> &str {
        &self.subject
    }

    pub fn passed(&self) -> bool {
        self.pass
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn metadata(&self) -> &Map<String, Value> {
        &self.metadata
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Adds a check. A failing check without a witness gets its observed
    /// value as witness, so failures are never bare.
    pub fn push(&mut self, mut check: Check) {
        if !check.pass && check.witness.is_none() {
            check.witness = Some(check.observed.clone());
        }
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    /// Folds another certificate's checks in, prefixing their names.
    pub fn absorb(&mut self, other: Certificate) {
        let prefix = other.subject;
        for mut c in other.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.push(c);
        }
    }

    pub fn set_meta(&mut self, key: &str, value: impl Serialize) {
        self.metadata.insert(key.to_string(), to_value(value));
    }

    pub fn meta(&self, key: &str) -> Option<&Value> {
        self.metadata.get(key)
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("certificate values are plain data")
}

/// Floats go into certificates as fixed-precision decimal strings so that
/// output is diffable and stable.
pub fn fmt_f64(x: f64) -> String {
    let s = format!("{x:.9}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.000000000".to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_check_gets_witness() {
        let mut cert = Certificate::new("demo");
        cert.push(Check::equal("a", "ref", 1, 1));
        assert!(cert.passed());
        cert.push(Check::equal("b", "ref", 1, 2));
        assert!(!cert.passed());
        assert_eq!(cert.check("b").unwrap().witness, Some(Value::from(2)));
    }

    #[test]
    fn empty_certificate_passes() {
        let cert = Certificate::new("empty");
        assert!(cert.passed());
        let json = serde_json::to_string(&cert).unwrap();
        assert_eq!(json, r#"{"subject":"empty","pass":true,"checks":[]}"#);
    }

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_f64(-0.0), "0.000000000");
        assert_eq!(fmt_f64(-1e-12), "0.000000000");
        assert_eq!(fmt_f64(1.5), "1.500000000");
        assert_eq!(fmt_f64(-2.25), "-2.250000000");
    }
}
