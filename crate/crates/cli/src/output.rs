use std::io::Write;

use monogen::function::FloatElement;
use monogen::linalg::RatMatrix;
use monogen::matrix::Mat2;
use monogen::{CliffordElement, Rational, Vector};
use serde_json::{json, Map, Value};

use crate::args::OutArg;

/// One unit of output: a JSON object, and optionally a hand-made text form.
pub struct Record {
    pub json: Value,
    pub text: Option<String>,
}

impl Record {
    pub fn new(json: Value) -> Self {
        Record { json, text: None }
    }

    pub fn with_text(json: Value, text: impl Into<String>) -> Self {
        Record { json, text: Some(text.into()) }
    }
}

/// What a command produced; `failed` marks a verification that did not pass.
#[derive(Default)]
pub struct Outcome {
    pub records: Vec<Record>,
    pub failed: bool,
}

impl Outcome {
    pub fn one(r: Record) -> Self {
        Outcome { records: vec![r], failed: false }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }
}

pub fn emit(out: &mut dyn Write, format: OutArg, record: &Record) -> std::io::Result<()> {
    match format {
        OutArg::Json => writeln!(out, "{}", record.json),
        OutArg::Text => match &record.text {
            Some(t) => writeln!(out, "{t}"),
            None => writeln!(out, "{}", render(&record.json)),
        },
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::Object(map) => map.iter().map(|(k, v)| format!("{k}: {}", inline(v))).collect::<Vec<_>>().join("\n"),
        other => inline(other),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Prints exact values as strings in blade syntax, or as floats.
#[derive(Clone, Copy)]
pub struct Fmt {
    pub float: bool,
}

impl Fmt {
    pub fn el(&self, e: &CliffordElement) -> Value {
        if self.float {
            Value::String(FloatElement::from_exact(e).to_string())
        } else {
            Value::String(e.to_string())
        }
    }

    pub fn vec(&self, v: &Vector) -> Value {
        self.el(&v.to_element())
    }

    pub fn rat(&self, r: &Rational) -> Value {
        if self.float {
            json!(r.to_f64())
        } else {
            Value::String(r.to_string())
        }
    }

    pub fn mat(&self, m: &Mat2) -> Value {
        json!([[self.el(&m.a), self.el(&m.b)], [self.el(&m.c), self.el(&m.d)]])
    }

    pub fn rat_matrix(&self, m: &RatMatrix) -> Value {
        Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|r| self.rat(r)).collect())).collect())
    }
}

/// Builds a JSON object keeping the given key order.
pub fn object<K: Into<String>>(entries: impl IntoIterator<Item = (K, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.into(), v)).collect::<Map<_, _>>())
}

/// The fields of a serialized report, for splicing into a larger object.
pub fn fields(v: Value) -> Vec<(String, Value)> {
    match v {
        Value::Object(map) => map.into_iter().collect(),
        _ => Vec::new(),
    }
}
