use std::io::Write;

use clap::ValueEnum;
use serde_json::Value;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

/// Writes results as one JSON object per line, or as `key: value` lines.
#[derive(Debug, Clone, Copy)]
pub struct Report {
    format: OutputFormat,
}

impl Report {
    pub fn new(format: OutputFormat) -> Self {
        Report { format }
    }

    pub fn emit(&self, out: &mut dyn Write, value: &Value) -> Result<(), Failure> {
        let text = match self.format {
            OutputFormat::Json => format!("{value}\n"),
            OutputFormat::Text => text_lines(value),
        };
        out.write_all(text.as_bytes())
            .and_then(|()| out.flush())
            .map_err(|e| Failure::Internal(format!("writing output: {e}")))
    }
}

fn text_lines(value: &Value) -> String {
    match value {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}: {}\n", plain(v)))
            .collect(),
        other => format!("{}\n", plain(other)),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(" "),
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", plain(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}
