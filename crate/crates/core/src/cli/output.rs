use serde_json::{json, Map, Value};

use super::Format;
use crate::numeric::C64;

pub fn complex_json(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// `{seed, summary, records}`; complex values are `{re, im}` objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub seed: u64,
    pub summary: Value,
    pub records: Vec<Value>,
}

impl Report {
    pub fn new(seed: u64, summary: Value, records: Vec<Value>) -> Self {
        Self { seed, summary, records }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "summary": self.summary,
            "records": self.records,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }

    /// Summary fields as `# key=value` lines, then one row per record with
    /// nested objects flattened to dotted column names.
    fn to_csv(&self) -> String {
        let mut out = format!("# seed={}\n", self.seed);
        let mut summary = Vec::new();
        flatten("", &self.summary, &mut summary);
        for (k, v) in summary {
            out.push_str(&format!("# {k}={v}\n"));
        }
        let rows: Vec<Vec<(String, String)>> = self
            .records
            .iter()
            .map(|r| {
                let mut cells = Vec::new();
                flatten("", r, &mut cells);
                cells
            })
            .collect();
        if let Some(first) = rows.first() {
            let header: Vec<&str> = first.iter().map(|(k, _)| k.as_str()).collect();
            out.push_str(&header.join(","));
            out.push('\n');
            for row in &rows {
                let cells: Vec<String> = row.iter().map(|(_, v)| csv_cell(v)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => flatten_map(map, &key, out),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), parts.join(";")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn flatten_map(map: &Map<String, Value>, key: &dyn Fn(&str) -> String, out: &mut Vec<(String, String)>) {
    for (k, v) in map {
        flatten(&key(k), v, out);
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
