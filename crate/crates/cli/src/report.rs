//! Report assembly and the three output formats.

use serde_json::{Map, Number, Value};
use xifree::series::rational_to_f64;
use xifree::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Serialisation choices shared by every subcommand.
#[derive(Clone, Copy, Debug)]
pub struct Style {
    pub approx: bool,
}

impl Style {
    /// Exact `p/q` string, or a 15-significant-digit float with `--approx`.
    pub fn rational(&self, value: &Rational) -> Value {
        if self.approx {
            float(rational_to_f64(value))
        } else {
            Value::String(value.to_string())
        }
    }

    pub fn rationals<'a>(&self, values: impl IntoIterator<Item = &'a Rational>) -> Value {
        Value::Array(values.into_iter().map(|v| self.rational(v)).collect())
    }
}

/// Float rounded to 15 significant digits.
pub fn float(value: f64) -> Value {
    if !value.is_finite() {
        return Value::String(value.to_string());
    }
    let rounded: f64 = format!("{value:.14e}").parse().unwrap_or(value);
    Number::from_f64(rounded).map(Value::Number).unwrap_or(Value::Null)
}

pub struct Report {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub results: Map<String, Value>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), parameters: Map::new(), results: Map::new(), notes: Vec::new() }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("command".into(), Value::String(self.command.clone()));
        out.insert("parameters".into(), Value::Object(self.parameters.clone()));
        out.insert("results".into(), Value::Object(self.results.clone()));
        out.insert("notes".into(), Value::Array(self.notes.iter().cloned().map(Value::String).collect()));
        Value::Object(out)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.to_json()).expect("values serialise"),
            Format::Csv => {
                let mut lines = vec!["key,value".to_string()];
                for (key, value) in flatten(&self.results) {
                    lines.push(format!("{},{}", csv_field(&key), csv_field(&value)));
                }
                lines.join("\n")
            }
            Format::Text => {
                let mut lines = vec![format!("# {}", self.command)];
                for (key, value) in flatten(&self.parameters) {
                    lines.push(format!("# {key} = {value}"));
                }
                for (key, value) in flatten(&self.results) {
                    lines.push(format!("{key} = {value}"));
                }
                for note in &self.notes {
                    lines.push(format!("# note: {note}"));
                }
                lines.join("\n")
            }
        }
    }
}

fn scalar(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(map: &Map<String, Value>) -> Vec<(String, String)> {
    fn walk(prefix: String, value: &Value, out: &mut Vec<(String, String)>) {
        match value {
            Value::Object(map) => {
                for (key, inner) in map {
                    let path = if prefix.is_empty() { key.clone() } else { format!("{prefix}.{key}") };
                    walk(path, inner, out);
                }
            }
            Value::Array(items) => {
                for (index, inner) in items.iter().enumerate() {
                    walk(format!("{prefix}[{index}]"), inner, out);
                }
            }
            other => out.push((prefix, scalar(other))),
        }
    }
    let mut out = Vec::new();
    walk(String::new(), &Value::Object(map.clone()), &mut out);
    out
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn rationals_round_trip() {
        let style = Style { approx: false };
        let value = Rational::new(5.into(), 24.into());
        let text = style.rational(&value);
        assert_eq!(text.as_str().unwrap().parse::<Rational>().unwrap(), value);
        assert_eq!(Style { approx: true }.rational(&Rational::one()), float(1.0));
    }

    #[test]
    fn formats() {
        let mut report = Report::new("demo");
        report.param("k", 2).result("b", serde_json::json!(["5/24", "5/16"])).note("hello, world");
        assert!(report.render(Format::Csv).contains("b[1],5/16"));
        assert!(report.render(Format::Text).contains("b[0] = 5/24"));
        let parsed: Value = serde_json::from_str(&report.render(Format::Json)).unwrap();
        assert_eq!(parsed["results"]["b"][0], "5/24");
        assert_eq!(float(0.1 + 0.2), float(0.3));
    }
}
