//! Report envelope and the canonical JSON / CSV encodings.

use std::io::Write;

use ffk_core::check::CheckResult;
use ffk_core::rational::{format_rational, Rational};
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1";

pub struct Envelope {
    pub command: &'static str,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<CheckResult>,
}

impl Envelope {
    pub fn new(command: &'static str, inputs: Value) -> Self {
        Self {
            command,
            inputs,
            results: Value::Object(Map::new()),
            checks: Vec::new(),
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "checks": self.checks.iter().map(check_value).collect::<Vec<_>>(),
        })
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn print(&self) {
        let mut out = std::io::stdout().lock();
        // serde_json's default map is ordered, so keys come out sorted.
        let text = serde_json::to_string_pretty(&self.to_value()).expect("values are serializable");
        let _ = writeln!(out, "{text}");
    }
}

pub fn check_value(c: &CheckResult) -> Value {
    let mut v = json!({ "name": c.name, "pass": c.pass, "detail": c.detail });
    if !c.offending.is_empty() {
        v["offending"] = json!(c.offending);
    }
    v
}

pub fn q(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

/// Shortest round-trip decimal; non-finite values become `null`.
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Text used for the same float in CSV cells.
pub fn float_text(x: f64) -> String {
    if x.is_finite() {
        serde_json::Number::from_f64(x).expect("finite").to_string()
    } else {
        String::new()
    }
}

pub fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .delimiter(b',')
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}
