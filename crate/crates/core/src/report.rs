//! Machine-readable check reports.
//!
//! A report is a list of checks. Each check records its inputs, the computed value,
//! the expected value with where that expectation comes from, and a pass flag derived
//! from comparing the two. Reports serialize to JSON under the schema [`SCHEMA`];
//! maps are ordered, so equal reports produce byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "tiltlab-report/1";

/// Where an expected value comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Stated in the literature; `citation` quotes the statement being checked.
    Published { citation: String },
    /// Follows from a definition or a one-line argument.
    Elementary { reason: String },
    /// Produced by an independent computation, named by `oracle`.
    Computed { oracle: String },
}

pub fn published(citation: &str) -> Provenance {
    Provenance::Published {
        citation: citation.into(),
    }
}

pub fn elementary(reason: &str) -> Provenance {
    Provenance::Elementary { reason: reason.into() }
}

pub fn computed(oracle: &str) -> Provenance {
    Provenance::Computed { oracle: oracle.into() }
}

/// How the computed value is compared with the expected one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Equal,
    /// Both values are integers and `computed <= expected`.
    AtMost,
    /// `expected` is an array containing `computed`.
    OneOf,
}

impl Comparison {
    fn holds(&self, computed: &Value, expected: &Value) -> bool {
        match self {
            Comparison::Equal => computed == expected,
            Comparison::AtMost => match (computed.as_i64(), expected.as_i64()) {
                (Some(c), Some(e)) => c <= e,
                _ => false,
            },
            Comparison::OneOf => expected.as_array().is_some_and(|v| v.contains(computed)),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Comparison::Equal => "==",
            Comparison::AtMost => "<=",
            Comparison::OneOf => "in",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub inputs: BTreeMap<String, Value>,
    pub computed: Value,
    pub expected: Value,
    pub comparison: Comparison,
    pub provenance: Provenance,
    pub pass: bool,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        computed: impl Serialize,
        comparison: Comparison,
        expected: impl Serialize,
        provenance: Provenance,
    ) -> Check {
        let computed = to_value(computed);
        let expected = to_value(expected);
        let pass = comparison.holds(&computed, &expected);
        Check {
            name: name.into(),
            inputs: BTreeMap::new(),
            computed,
            expected,
            comparison,
            provenance,
            pass,
        }
    }

    pub fn equal(name: impl Into<String>, computed: impl Serialize, expected: impl Serialize, provenance: Provenance) -> Check {
        Check::new(name, computed, Comparison::Equal, expected, provenance)
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Check {
        self.inputs.insert(key.into(), to_value(value));
        self
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values are plain data")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub field: String,
    pub cutoff: usize,
    pub max_path_len: usize,
    pub version: String,
}

impl Environment {
    pub fn new(field: &str, cutoff: usize, max_path_len: usize) -> Environment {
        Environment {
            field: field.into(),
            cutoff,
            max_path_len,
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: Vec<String>,
    pub environment: Environment,
    /// Sorted by name.
    pub checks: Vec<Check>,
    /// Free-form results that are reported but not checked.
    pub notes: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: Vec<String>, environment: Environment) -> Report {
        Report {
            schema: SCHEMA.into(),
            command,
            environment,
            checks: Vec::new(),
            notes: BTreeMap::new(),
        }
    }

    /// Insert keeping the checks ordered by name; equal names keep insertion order.
    pub fn push(&mut self, check: Check) {
        let at = self.checks.partition_point(|c| c.name <= check.name);
        self.checks.insert(at, check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.notes.insert(key.into(), to_value(value));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Human-readable summary: one line per check, then the notes.
    pub fn human(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {}: {} {} {}",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                compact(&c.computed),
                c.comparison.symbol(),
                compact(&c.expected)
            );
        }
        for (k, v) in &self.notes {
            let _ = writeln!(out, "{k}: {}", compact(v));
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => {
            let s = other.to_string();
            if s.len() > 160 {
                format!("{}...", &s[..157])
            } else {
                s
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new(vec!["tiltlab".into(), "suite".into()], Environment::new("Q", 20, 30));
        r.push(Check::equal("b", 3, 3, elementary("count")).input("algebra", "A2"));
        r.push(Check::new("a", 1, Comparison::AtMost, 1, published("dimension at most 1")));
        r.push(Check::new("c", "x", Comparison::OneOf, ["y", "z"], computed("search")));
        r.note("sizes", vec![1, 2]);
        r
    }

    #[test]
    fn pass_is_computed_and_checks_are_sorted() {
        let r = sample();
        let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["a", "b", "c"]);
        assert!(r.checks[0].pass && r.checks[1].pass && !r.checks[2].pass);
        assert!(!r.passed());
        assert!(r.human().contains("[FAIL] c: x in [\"y\",\"z\"]"));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let r = sample();
        let text = r.to_json();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
        assert!(text.contains("\"schema\": \"tiltlab-report/1\""));
        assert!(text.contains("\"kind\": \"published\""));
    }
}
