//! Run reports: ordered key/value records rendered as text or a JSON line.

use std::fs::OpenOptions;
use std::io::Write as _;
use std::path::Path;

use clap::ValueEnum;
use liftdec_core::Rational;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Clone, Debug)]
pub struct Report {
    command: String,
    entries: Vec<(String, Value)>,
}

/// Floats are printed with 10 decimals so reports never depend on shortest-repr quirks.
pub fn fixed(x: f64) -> Value {
    if x.is_finite() {
        let rounded: f64 = format!("{x:.10}").parse().unwrap_or(x);
        Value::from(if rounded == 0.0 { 0.0 } else { rounded })
    } else {
        Value::Null
    }
}

pub fn ratio(q: Rational) -> Value {
    Value::from(q.to_string())
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            entries: Vec::new(),
        }
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.entries.push((key.to_string(), value.into()));
    }

    pub fn float(&mut self, key: &str, x: f64) {
        self.put(key, fixed(x));
    }

    pub fn rational(&mut self, key: &str, q: Rational) {
        self.put(key, ratio(q));
    }

    /// Entries as a JSON object (keys sorted).
    pub fn to_value(&self) -> Value {
        Value::Object(self.entries.iter().cloned().collect())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = format!("# {}\n", self.command);
                for (k, v) in &self.entries {
                    let shown = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    out.push_str(&format!("{k}: {shown}\n"));
                }
                out
            }
            Format::JsonLines => {
                let mut fields = vec![format!("\"command\":{}", Value::from(self.command.as_str()))];
                for (k, v) in &self.entries {
                    fields.push(format!("{}:{}", Value::from(k.as_str()), v));
                }
                format!("{{{}}}\n", fields.join(","))
            }
        }
    }

    /// Appends the rendered report to `dir/<command>.report`.
    pub fn append_to(&self, dir: &Path, format: Format) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let name = format!("{}.report", self.command.replace(' ', "-"));
        let mut f = OpenOptions::new().create(true).append(true).open(dir.join(name))?;
        f.write_all(self.render(format).as_bytes())
    }
}
