//! Structured experiment results.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Absolute slack allowed on floating-point bound comparisons.
pub const FLOAT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "==")]
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "==",
        }
    }
}

/// One asserted inequality: `measured <relation> bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub label: String,
    pub formula: String,
    pub measured: Value,
    pub relation: Relation,
    pub bound: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: BTreeMap<String, Value>,
    pub measured: BTreeMap<String, Value>,
    pub checks: Vec<BoundCheck>,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>) -> Self {
        ExperimentReport {
            name: name.into(),
            parameters: BTreeMap::new(),
            measured: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(key.to_owned(), to_value(value));
        self
    }

    pub fn measure(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.measured.insert(key.to_owned(), to_value(value));
        self
    }

    pub fn measured_f64(&self, key: &str) -> Option<f64> {
        self.measured.get(key).and_then(Value::as_f64)
    }

    pub fn measured_u64(&self, key: &str) -> Option<u64> {
        self.measured.get(key).and_then(Value::as_u64)
    }

    /// Records a float comparison with [`FLOAT_SLACK`] tolerance.
    pub fn check_f64(&mut self, label: &str, formula: &str, measured: f64, relation: Relation, bound: f64) -> bool {
        let pass = match relation {
            Relation::Le => measured <= bound + FLOAT_SLACK,
            Relation::Ge => measured + FLOAT_SLACK >= bound,
            Relation::Eq => (measured - bound).abs() <= FLOAT_SLACK,
        };
        self.push_check(label, formula, to_value(measured), relation, to_value(bound), pass)
    }

    /// Records a comparison decided exactly by the caller (big integers,
    /// rationals); `measured` and `bound` are for display.
    pub fn check_exact(
        &mut self,
        label: &str,
        formula: &str,
        measured: impl Serialize,
        relation: Relation,
        bound: impl Serialize,
        pass: bool,
    ) -> bool {
        self.push_check(label, formula, to_value(measured), relation, to_value(bound), pass)
    }

    fn push_check(&mut self, label: &str, formula: &str, measured: Value, relation: Relation, bound: Value, pass: bool) -> bool {
        self.checks.push(BoundCheck {
            label: label.to_owned(),
            formula: formula.to_owned(),
            measured,
            relation,
            bound,
            pass,
        });
        pass
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Text summary: `key=value` lines for parameters and measurements,
    /// then one aligned line per check.
    pub fn to_summary(&self) -> String {
        let mut out = String::new();
        writeln!(out, "experiment: {}", self.name).unwrap();
        for (k, v) in &self.parameters {
            writeln!(out, "  param    {k}={}", display(v)).unwrap();
        }
        for (k, v) in &self.measured {
            writeln!(out, "  measured {k}={}", display(v)).unwrap();
        }
        let lw = self.checks.iter().map(|c| c.label.len()).max().unwrap_or(0);
        for c in &self.checks {
            writeln!(
                out,
                "  [{}] {:<lw$}  {} {} {}   ({})",
                if c.pass { "pass" } else { "FAIL" },
                c.label,
                display(&c.measured),
                c.relation.symbol(),
                display(&c.bound),
                c.formula
            )
            .unwrap();
        }
        writeln!(out, "verdict: {}", if self.passed() { "pass" } else { "fail" }).unwrap();
        out
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn display(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Mean and standard error of a sample.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
