//! Experiment driver for `hypactions-core`: JSON configs in, byte-stable
//! JSON summaries and CSV tables out, and a verifier that re-checks every
//! recorded witness without searching again.

pub mod bundle;
pub mod config;
pub mod error;
pub mod experiments;
pub mod groups;
pub mod parallel;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::Value;

pub use bundle::{Outcome, Table};
pub use config::{Experiment, ExperimentConfig, FORMAT};
pub use error::RunError;
pub use experiments::Checks;

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub summary: Value,
    pub tables: Vec<Table>,
}

/// Runs one config; `base` resolves relative file parameters.
///
/// The time cap is checked once the run finishes, so runs are never cut
/// short and their outputs stay deterministic.
pub fn run(config: &ExperimentConfig, base: &Path) -> Result<RunOutput, RunError> {
    let start = Instant::now();
    let outcome = parallel::with_pool(|| experiments::run(config, base))??;
    if let Some(cap) = config.budgets.time_cap_s {
        let elapsed = start.elapsed().as_secs_f64();
        if elapsed > cap {
            return Err(RunError::TimeCap { cap, elapsed });
        }
    }
    Ok(RunOutput {
        summary: bundle::summary(config, &outcome),
        tables: outcome.tables,
    })
}

pub fn read_json(path: &Path) -> Result<Value, RunError> {
    let text = fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| RunError::invalid("$", format!("{}: not JSON: {e}", path.display())))
}

/// Default output directory: `<stem>.out` next to the config.
pub fn default_out_dir(config_path: &Path) -> PathBuf {
    let stem = config_path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("run");
    config_path.with_file_name(format!("{stem}.out"))
}

/// Reads, runs and writes a bundle; returns the summary path.
pub fn run_file(config_path: &Path, out: Option<&Path>) -> Result<PathBuf, RunError> {
    let config = ExperimentConfig::from_value(&read_json(config_path)?)?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    let output = run(&config, base)?;
    let dir = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| default_out_dir(config_path));
    bundle::write_bundle(&dir, &output.summary, &output.tables)
}

/// Re-checks the witnesses of a summary; the config is taken from its echo.
pub fn verify_summary(summary: &Value) -> Result<Checks, RunError> {
    let format = summary.get("format").and_then(Value::as_u64);
    if format != Some(FORMAT) {
        return Err(RunError::Verification(vec![format!(
            "format: expected {FORMAT}, found {format:?}"
        )]));
    }
    let tool = summary.pointer("/tool/name").and_then(Value::as_str);
    if tool != Some(bundle::TOOL) {
        return Err(RunError::Verification(vec![format!(
            "tool.name: expected {}, found {tool:?}",
            bundle::TOOL
        )]));
    }
    let raw = summary
        .get("config")
        .ok_or_else(|| RunError::Verification(vec!["config: missing".into()]))?;
    let config = ExperimentConfig::from_value(raw)?;
    let named = summary.get("experiment").and_then(Value::as_str);
    if named != Some(config.experiment.name()) {
        return Err(RunError::Verification(vec![format!(
            "experiment: {named:?} does not match the config"
        )]));
    }
    let results = summary
        .get("results")
        .ok_or_else(|| RunError::Verification(vec!["results: missing".into()]))?;
    parallel::with_pool(|| experiments::verify(&config, results))?
}

pub fn verify_file(path: &Path) -> Result<Checks, RunError> {
    let checks = verify_summary(&read_json(path)?)?;
    if checks.failures.is_empty() {
        Ok(checks)
    } else {
        Err(RunError::Verification(checks.failures))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn summaries_echo_config_and_version() {
        let raw = json!({"group": {"kind": "free", "rank": 2}, "experiment": "tau", "parameters": {"g": "ab"}, "seed": 3});
        let out = run(&ExperimentConfig::from_value(&raw).unwrap(), Path::new(".")).unwrap();
        assert_eq!(out.summary["config"], raw);
        assert_eq!(out.summary["format"], json!(1));
        assert_eq!(out.summary["tool"]["version"], json!(bundle::VERSION));
        assert_eq!(out.summary["tables"][0]["file"], json!("trace.csv"));
        assert!(verify_summary(&out.summary).unwrap().failures.is_empty());
    }

    #[test]
    fn verify_rejects_foreign_summaries() {
        assert!(matches!(
            verify_summary(&json!({"format": 2})),
            Err(RunError::Verification(_))
        ));
        let s = json!({"format": 1, "tool": {"name": "hypactions"}, "experiment": "delta",
                       "config": {"experiment": "tau", "group": {"kind": "free", "rank": 2}, "parameters": {"g": "a"}}, "results": {}});
        assert!(matches!(verify_summary(&s), Err(RunError::Verification(_))));
    }

    #[test]
    fn time_cap_is_enforced_after_the_run() {
        let raw = json!({"group": {"kind": "free", "rank": 2}, "experiment": "delta", "parameters": {"radius": 2},
                         "budgets": {"time_cap_s": 0.0}});
        let err = run(&ExperimentConfig::from_value(&raw).unwrap(), Path::new(".")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn default_out_dir_sits_next_to_config() {
        assert_eq!(
            default_out_dir(Path::new("/x/delta.json")),
            PathBuf::from("/x/delta.out")
        );
    }
}
