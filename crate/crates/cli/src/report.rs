use std::fmt::Write as _;
use std::time::Duration;

use serde_json::{json, Map, Value};

use carnot_core::lie::GradedLieAlgebra;
use carnot_core::linalg::Matrix;
use carnot_core::operators::{OperatorMatrix, SymbolMatrix};
use carnot_core::{rational, Rational};

use crate::CliError;

pub const TOOL_VERSION: &str = concat!("carnot ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format `{s}` (text, json, csv)")),
        }
    }
}

/// Outcome of one subcommand. The JSON form leaves out timings so equal
/// inputs give byte-identical output.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub task: String,
    pub seed: Option<u64>,
    pub exit_code: i32,
    pub payload: Map<String, Value>,
    pub summary: Vec<String>,
    pub csv: Option<String>,
    pub timings: Vec<(String, Duration)>,
}

impl RunReport {
    pub fn new(task: impl Into<String>) -> Self {
        RunReport {
            task: task.into(),
            seed: None,
            exit_code: crate::exit::OK,
            payload: Map::new(),
            summary: Vec::new(),
            csv: None,
            timings: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.payload.insert(key.to_string(), value);
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.summary.push(text.into());
    }

    pub fn time(&mut self, label: &str, d: Duration) {
        self.timings.push((label.to_string(), d));
    }

    pub fn to_json(&self) -> String {
        let mut obj = self.payload.clone();
        obj.insert("task".into(), json!(self.task));
        obj.insert("tool_version".into(), json!(TOOL_VERSION));
        obj.insert("seed".into(), json!(self.seed));
        obj.insert("exit_code".into(), json!(self.exit_code));
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("[{}] {}\n", self.task, TOOL_VERSION);
        for l in &self.summary {
            let _ = writeln!(out, "  {l}");
        }
        for (label, d) in &self.timings {
            let _ = writeln!(out, "  time {label}: {:.3}s", d.as_secs_f64());
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Text => Ok(self.to_text()),
            Format::Json => Ok(self.to_json()),
            Format::Csv => {
                self.csv.clone().ok_or_else(|| CliError::Usage(format!("`{}` has no CSV output", self.task)))
            }
        }
    }
}

pub fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|q| json!(rational::format(q))).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| rationals(m.row(i))).collect())
}

/// Word-level listing with 1-based letters.
pub fn operator(op: &OperatorMatrix) -> Value {
    let terms: Vec<Value> = op
        .terms()
        .iter()
        .map(|(w, m)| {
            json!({
                "word": w.iter().map(|l| l + 1).collect::<Vec<_>>(),
                "matrix": matrix(m),
            })
        })
        .collect();
    json!({
        "order": op.order(),
        "dimV": op.dim_in(),
        "dimE": op.dim_out(),
        "terms": terms,
    })
}

pub fn symbol(s: &SymbolMatrix) -> Value {
    Value::Array(s.terms().iter().map(|(beta, m)| json!({ "beta": beta.exponents(), "matrix": matrix(m) })).collect())
}

pub fn group(alg: &GradedLieAlgebra) -> Value {
    json!({
        "name": alg.name(),
        "layer_dims": alg.layer_dims(),
        "basis_convention": alg.basis_convention(),
    })
}
