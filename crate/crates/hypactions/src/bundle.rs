//! Output bundles: one `summary.json` plus CSV tables, all byte-stable.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::{ExperimentConfig, FORMAT};
use crate::error::RunError;

pub const TOOL: &str = "hypactions";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    /// CSV text behind a `# format: 1` comment line.
    pub fn to_csv(&self) -> Result<String, RunError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| RunError::Failed(format!("csv: {e}"));
        w.write_record(&self.header).map_err(fail)?;
        for r in &self.rows {
            w.write_record(r).map_err(fail)?;
        }
        let body = w
            .into_inner()
            .map_err(|e| RunError::Failed(format!("csv: {e}")))?;
        Ok(format!(
            "# format: {FORMAT}\n{}",
            String::from_utf8_lossy(&body)
        ))
    }
}

/// What an experiment hands back: JSON results and bulk tables.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Outcome {
    pub results: Value,
    pub tables: Vec<Table>,
}

/// Shortest round-trip decimal; `inf`, `-inf`, `nan` spelled out.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// JSON number, or the `num` spelling for non-finite values.
pub fn jnum(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(num(x))
    }
}

pub fn summary(config: &ExperimentConfig, outcome: &Outcome) -> Value {
    let tables: Vec<Value> = outcome
        .tables
        .iter()
        .map(|t| json!({"name": t.name, "file": t.file_name(), "rows": t.rows.len()}))
        .collect();
    json!({
        "format": FORMAT,
        "tool": {"name": TOOL, "version": VERSION},
        "experiment": config.experiment.name(),
        "config": config.raw,
        "results": outcome.results,
        "tables": tables,
    })
}

pub fn render_summary(summary: &Value) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("json values serialize");
    s.push('\n');
    s
}

/// Writes `summary.json` and the tables into `dir`; returns the summary path.
pub fn write_bundle(dir: &Path, summary: &Value, tables: &[Table]) -> Result<PathBuf, RunError> {
    fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
    for t in tables {
        let p = dir.join(t.file_name());
        fs::write(&p, t.to_csv()?).map_err(|e| RunError::io(&p, e))?;
    }
    let p = dir.join("summary.json");
    fs::write(&p, render_summary(summary)).map_err(|e| RunError::io(&p, e))?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_version_line_and_quotes() {
        let mut t = Table::new("x", &["word", "trace"]);
        t.push(vec!["ab".into(), "1, 2".into()]);
        assert_eq!(
            t.to_csv().unwrap(),
            "# format: 1\nword,trace\nab,\"1, 2\"\n"
        );
    }

    #[test]
    fn numbers_render_stably() {
        assert_eq!(num(0.1 + 0.2), "0.30000000000000004");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(jnum(f64::NEG_INFINITY), json!("-inf"));
    }
}
