use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

pub type BoxResult<T> = std::result::Result<T, Box<dyn std::error::Error + Send + Sync>>;

/// Everything that determines a run's output. Thread count is deliberately absent.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qmax: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<String>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrupt: Option<u64>,
    pub seed: u64,
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn name(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A command's result: a table, scalar summary fields, and any failed assertions.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(String, Value)>,
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), ..Self::default() }
    }

    pub fn row(&mut self, values: Vec<Value>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(message());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn status(&self) -> &'static str {
        if self.passed() {
            "PASS"
        } else {
            "FAIL"
        }
    }

    pub fn render(&self, config: &RunConfig, format: Format) -> BoxResult<Vec<u8>> {
        match format {
            Format::Csv => self.render_csv(config),
            Format::Json => self.render_json(config),
        }
    }

    fn render_csv(&self, config: &RunConfig) -> BoxResult<Vec<u8>> {
        let mut buf = Vec::new();
        writeln!(buf, "# config: {}", serde_json::to_string(config)?)?;
        for (k, v) in &self.summary {
            writeln!(buf, "# {k}: {}", cell(v))?;
        }
        writeln!(buf, "# status: {}", self.status())?;
        for f in &self.failures {
            writeln!(buf, "# failure: {f}")?;
        }
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell))?;
        }
        Ok(w.into_inner().map_err(|e| e.into_error())?)
    }

    fn render_json(&self, config: &RunConfig) -> BoxResult<Vec<u8>> {
        let mut summary = Map::new();
        for (k, v) in &self.summary {
            summary.insert(k.clone(), v.clone());
        }
        let doc = json!({
            "config": config,
            "results": {
                "status": self.status(),
                "failures": self.failures,
                "summary": summary,
                "columns": self.columns,
                "rows": self.rows,
            },
        });
        let mut buf = serde_json::to_vec_pretty(&doc)?;
        buf.push(b'\n');
        Ok(buf)
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Rounds away floating noise so that exact zeros print as `0`.
pub fn clean(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}
