//! Verification reports and their text/JSON serializations.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Where a residual was found: the generators/basis vectors involved and
/// the integer indices (`m`, `n`, ...) of the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Location {
    pub subjects: Vec<String>,
    pub indices: BTreeMap<String, i64>,
}

impl Location {
    pub fn new<S: Into<String>>(subjects: impl IntoIterator<Item = S>) -> Self {
        Location {
            subjects: subjects.into_iter().map(Into::into).collect(),
            indices: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: i64) -> Self {
        self.indices.insert(key.to_string(), value);
        self
    }

    pub fn index(&self, key: &str) -> Option<i64> {
        self.indices.get(key).copied()
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.subjects.join(", "))?;
        for (k, v) in &self.indices {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    /// Identity that failed, e.g. `C2`, `M1`, `torsion`, `jacobi`.
    pub check: String,
    pub location: Location,
    /// Machine-readable residual (the JSON form of the offending element).
    pub residual: Value,
    /// Human-readable residual.
    pub rendering: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub suite: String,
    pub violations: Vec<Violation>,
    /// Annotations such as the reliable window of a windowed computation.
    pub notes: Vec<String>,
    /// Computed results attached to the report (orders, bases, verdicts).
    pub data: BTreeMap<String, Value>,
    /// Wall-clock time; shown in text output only so JSON stays reproducible.
    pub elapsed: Option<Duration>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report {
            suite: suite.into(),
            ..Report::default()
        }
    }

    pub fn status(&self) -> Status {
        if self.violations.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(
        &mut self,
        check: &str,
        location: Location,
        residual: Value,
        rendering: impl Into<String>,
    ) {
        self.violations.push(Violation {
            check: check.to_string(),
            location,
            residual,
            rendering: rendering.into(),
        });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.data.insert(key.to_string(), value);
    }

    pub fn merge(&mut self, other: Report) {
        self.violations.extend(other.violations);
        self.notes.extend(other.notes);
        self.data.extend(other.data);
    }

    /// First violation of the named check, if any.
    pub fn find(&self, check: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.check == check)
    }

    pub fn to_json(&self) -> Value {
        let violations: Vec<Value> = self
            .violations
            .iter()
            .map(|v| {
                json!({
                    "check": v.check,
                    "location": {
                        "subjects": v.location.subjects,
                        "indices": v.location.indices,
                    },
                    "residual": v.residual,
                    "rendering": v.rendering,
                })
            })
            .collect();
        let mut obj = json!({
            "suite": self.suite,
            "status": self.status(),
            "violations": violations,
        });
        if !self.notes.is_empty() {
            obj["notes"] = json!(self.notes);
        }
        if !self.data.is_empty() {
            obj["data"] = json!(self.data);
        }
        obj
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let tag = match self.status() {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        out.push_str(&format!("[{tag}] {}\n", self.suite));
        for note in &self.notes {
            out.push_str(&format!("  {note}\n"));
        }
        for (key, value) in &self.data {
            out.push_str(&format!("  {key}: {}\n", render_value(value)));
        }
        for v in &self.violations {
            out.push_str(&format!("  violation {} at {}: {}\n", v.check, v.location, v.rendering));
        }
        if let Some(t) = self.elapsed {
            out.push_str(&format!("  time: {:.3} s\n", t.as_secs_f64()));
        }
        out
    }
}

fn render_value(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(Value::is_string) => items
            .iter()
            .map(|v| v.as_str().unwrap_or_default().to_string())
            .collect::<Vec<_>>()
            .join("; "),
        other => other.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (text|json)")),
        }
    }
}

/// Serializes reports sorted by suite name (stable: equal names keep their
/// order). JSON keys are emitted in sorted order.
pub fn emit_reports(reports: &[Report], format: Format) -> String {
    let mut sorted: Vec<&Report> = reports.iter().collect();
    sorted.sort_by(|a, b| a.suite.cmp(&b.suite));
    match format {
        Format::Text => sorted.iter().map(|r| r.to_text()).collect(),
        Format::Json => {
            let value = if sorted.len() == 1 {
                sorted[0].to_json()
            } else {
                Value::Array(sorted.iter().map(|r| r.to_json()).collect())
            };
            let mut s = serde_json::to_string_pretty(&value).expect("json");
            s.push('\n');
            s
        }
    }
}

pub fn emit_report(report: &Report, format: Format) -> String {
    emit_reports(std::slice::from_ref(report), format)
}
