//! One module per experiment; each turns a validated config into an
//! [`Outcome`] and can re-check the witnesses of a summary it produced.

pub mod borel;
pub mod compress;
pub mod cone;
pub mod delta;
pub mod isotropy;
pub mod qm;
pub mod sl2;
pub mod tau;
pub mod tightspan;

use std::path::Path;

use serde_json::Value;

use crate::bundle::Outcome;
use crate::config::{Experiment, ExperimentConfig};
use crate::error::RunError;

/// Runs the experiment; `base` resolves relative paths inside parameters.
pub fn run(config: &ExperimentConfig, base: &Path) -> Result<Outcome, RunError> {
    match config.experiment {
        Experiment::Delta => delta::run(config),
        Experiment::Tau => tau::run(config),
        Experiment::Compress => compress::run(config),
        Experiment::BorelOrder => borel::run(config),
        Experiment::QmCertify => qm::run(config),
        Experiment::Sl2Embed => sl2::run(config),
        Experiment::Tightspan => tightspan::run(config, base),
        Experiment::ConeOff => cone::run(config),
        Experiment::IsotropyProbe => isotropy::run(config),
    }
}

/// Re-checks the recorded witnesses; returns the list of failed checks
/// and the number of checks made.
pub fn verify(config: &ExperimentConfig, results: &Value) -> Result<Checks, RunError> {
    let mut c = Checks::default();
    match config.experiment {
        Experiment::Delta => delta::verify(config, results, &mut c)?,
        Experiment::Tau => tau::verify(config, results, &mut c)?,
        Experiment::Compress => compress::verify(config, results, &mut c)?,
        Experiment::BorelOrder => borel::verify(config, results, &mut c)?,
        Experiment::QmCertify => qm::verify(config, results, &mut c)?,
        Experiment::Sl2Embed => sl2::verify(config, results, &mut c)?,
        Experiment::Tightspan => tightspan::verify(config, results, &mut c)?,
        Experiment::ConeOff => cone::verify(config, results, &mut c)?,
        Experiment::IsotropyProbe => isotropy::verify(config, results, &mut c)?,
    }
    Ok(c)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Checks {
    pub passed: usize,
    pub failures: Vec<String>,
}

impl Checks {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(what());
        }
    }

    pub fn close(&mut self, what: &str, recorded: f64, recomputed: f64) {
        let ok = recorded == recomputed
            || (recorded - recomputed).abs() <= 1e-9 * (1.0 + recomputed.abs());
        self.check(ok, || {
            format!("{what}: recorded {recorded}, recomputed {recomputed}")
        });
    }
}

/// Reads a field of the recorded results, failing with its path.
pub(crate) fn field<'a>(v: &'a Value, path: &str) -> Result<&'a Value, RunError> {
    let mut cur = v;
    for part in path.split('.') {
        cur = match part.parse::<usize>() {
            Ok(i) => cur.get(i),
            Err(_) => cur.get(part),
        }
        .ok_or_else(|| RunError::Verification(vec![format!("results.{path}: missing")]))?;
    }
    Ok(cur)
}

pub(crate) fn f64_at(v: &Value, path: &str) -> Result<f64, RunError> {
    let x = field(v, path)?;
    match x {
        Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        Value::String(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
        _ => x
            .as_f64()
            .ok_or_else(|| RunError::Verification(vec![format!("results.{path}: not a number")])),
    }
}

pub(crate) fn str_at<'a>(v: &'a Value, path: &str) -> Result<&'a str, RunError> {
    field(v, path)?
        .as_str()
        .ok_or_else(|| RunError::Verification(vec![format!("results.{path}: not a string")]))
}

pub(crate) fn array_at<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, RunError> {
    field(v, path)?
        .as_array()
        .ok_or_else(|| RunError::Verification(vec![format!("results.{path}: not a list")]))
}
