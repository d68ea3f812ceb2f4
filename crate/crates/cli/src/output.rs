//! The output document and its two renderings.

use mersexp::{RMatrix, Residue};
use serde::Serialize;
use serde_json::{json, Map, Value};

/// Every command prints exactly one of these.
#[derive(Debug, Serialize)]
pub struct OutputDocument {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub result: Value,
    pub case_label: Option<String>,
    pub warnings: Vec<String>,
    /// Text rendering; not part of the JSON document.
    #[serde(skip)]
    pub text: Vec<String>,
    /// The one line `--quiet` keeps in text mode.
    #[serde(skip)]
    pub headline: String,
}

impl OutputDocument {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            inputs: Map::new(),
            result: Value::Null,
            case_label: None,
            warnings: Vec::new(),
            text: Vec::new(),
            headline: String::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn line(&mut self, line: impl Into<String>) {
        self.text.push(line.into());
    }

    pub fn render(&self, json_mode: bool, quiet: bool) -> String {
        if json_mode {
            let mut s = serde_json::to_string_pretty(self).expect("document serializes");
            s.push('\n');
            return s;
        }
        if quiet {
            return format!("{}\n", self.headline);
        }
        let mut out = String::new();
        for l in &self.text {
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

/// `{"value": "...", "bits": "0b..."}`.
pub fn residue_json(x: &Residue) -> Value {
    json!({ "value": x.value().to_string(), "bits": x.to_binary_string() })
}

pub fn matrix_json(m: &RMatrix) -> Value {
    json!(m.to_rows())
}

/// Indented matrix lines for text mode.
pub fn matrix_lines(m: &RMatrix) -> Vec<String> {
    m.to_string().lines().map(|l| format!("  {l}")).collect()
}
