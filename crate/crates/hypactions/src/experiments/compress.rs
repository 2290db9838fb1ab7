//! Compressed word lengths of family powers against the ceiling and the
//! linear lower bound.

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use hypactions_core::compression::{
    compressed_word_length, verify_length_bounds, Cap, CompressedGenSet, Family, LengthBoundReport,
};
use hypactions_core::group::{FreeGroup, FreeWord};
use hypactions_core::lox::build_quasi_axis;
use hypactions_core::metric::free_word_length;

use super::{array_at, f64_at, Checks};
use crate::bundle::{jnum, num, Outcome, Table};
use crate::config::{ExperimentConfig, GroupSpec};
use crate::error::RunError;
use crate::groups::free_word;

#[derive(Debug, Deserialize)]
struct Params {
    genset: Value,
    #[serde(default = "twelve")]
    k_max: u64,
    alpha: Option<f64>,
    #[serde(default)]
    words: Vec<String>,
}

fn twelve() -> u64 {
    12
}

fn rank(config: &ExperimentConfig) -> Result<u32, RunError> {
    match config.group {
        Some(GroupSpec::Free { rank }) => Ok(rank),
        _ => Err(RunError::invalid("$.group.kind", "expected free")),
    }
}

pub(crate) fn parse_cap(v: &Value, path: &str) -> Result<Cap, RunError> {
    match v {
        Value::String(s) if s == "inf" => Ok(Cap::Infinite),
        _ => match v.as_u64() {
            Some(n) if n > 0 => Ok(Cap::Finite(n)),
            _ => Err(RunError::invalid(
                path,
                format!("expected a positive integer or \"inf\", found {v}"),
            )),
        },
    }
}

fn letter_index(s: &str, rank: u32, path: &str) -> Result<u32, RunError> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c @ 'a'..='z'), None) if (c as u32 - 'a' as u32) < rank => Ok(c as u32 - 'a' as u32),
        _ => Err(RunError::invalid(
            path,
            format!("expected a generator letter of rank {rank}, found \"{s}\""),
        )),
    }
}

/// `{"base": [...], "families": [{"w": .., "cap": ..}]}`, every problem listed.
pub fn parse_genset(v: &Value, rank: u32) -> Result<CompressedGenSet, RunError> {
    let mut errors = Vec::new();
    let mut base = Vec::new();
    let mut families = Vec::new();
    let root = "$.parameters.genset";
    match v.get("base").and_then(Value::as_array) {
        Some(items) => {
            for (i, x) in items.iter().enumerate() {
                let path = format!("{root}.base[{i}]");
                match x.as_str().map(|s| letter_index(s, rank, &path)) {
                    Some(Ok(l)) => base.push(l),
                    Some(Err(RunError::Validation(e))) => errors.extend(e),
                    _ => errors.push(format!("{path}: expected a letter")),
                }
            }
        }
        None => errors.push(format!("{root}.base: expected a list of letters")),
    }
    match v.get("families").and_then(Value::as_array) {
        Some(items) => {
            for (i, f) in items.iter().enumerate() {
                let path = format!("{root}.families[{i}]");
                let w = f
                    .get("w")
                    .and_then(Value::as_str)
                    .map(|s| free_word(rank, s, &format!("{path}.w")));
                let cap = f.get("cap").map(|c| parse_cap(c, &format!("{path}.cap")));
                match (w, cap) {
                    (Some(Ok(w)), Some(Ok(cap))) => families.push(Family { w, cap }),
                    (w, cap) => {
                        for r in [w.map(|x| x.map(|_| ())), cap.map(|x| x.map(|_| ()))] {
                            match r {
                                Some(Err(RunError::Validation(e))) => errors.extend(e),
                                None => errors.push(format!("{path}: needs \"w\" and \"cap\"")),
                                _ => {}
                            }
                        }
                    }
                }
                if let Some(obj) = f.as_object() {
                    for k in obj.keys().filter(|k| *k != "w" && *k != "cap") {
                        errors.push(format!("{path}.{k}: unknown field"));
                    }
                }
            }
        }
        None => errors.push(format!("{root}.families: expected a list")),
    }
    if !errors.is_empty() {
        errors.dedup();
        return Err(RunError::Validation(errors));
    }
    CompressedGenSet::new(base, families).map_err(|e| RunError::invalid(root, e))
}

/// Largest ratio of axis parameter distance to word distance, over a window
/// of three periods: the multiplicative constant of the quasi-axis.
fn axis_constant(w: &FreeWord) -> Result<f64, RunError> {
    let group = FreeGroup::new(w.min_rank().max(1));
    let gamma: Vec<FreeWord> = w
        .letters()
        .iter()
        .map(|&x| FreeWord::from_letters([x]))
        .collect();
    let axis = build_quasi_axis(&group, w, &gamma, 1, &free_word_length)?;
    let v = &axis.vertices;
    let mut k = 1.0f64;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let d = v[i].1.inverse().mul(&v[j].1).len() as f64;
            k = k.max((v[j].0 - v[i].0) as f64 / d);
        }
    }
    Ok(k)
}

pub fn run(config: &ExperimentConfig) -> Result<Outcome, RunError> {
    let p: Params = config.params()?;
    let rank = rank(config)?;
    let set = parse_genset(&p.genset, rank)?;
    let budget = config.budgets.length_budget;
    let ks: Vec<f64> = set
        .families()
        .iter()
        .map(|f| axis_constant(&f.w))
        .collect::<Result<_, _>>()?;
    let big_k = ks.iter().copied().fold(1.0, f64::max);
    let alpha_nominal = 1.0 / (2.0e3 * big_k);
    let alpha = p.alpha.unwrap_or(alpha_nominal);
    let cells: Vec<(usize, u64)> = (0..set.families().len())
        .flat_map(|j| (1..=p.k_max).map(move |k| (j, k)))
        .collect();
    let reports: Vec<LengthBoundReport> = cells
        .par_iter()
        .map(|&(j, k)| verify_length_bounds(&set, j, k, alpha, budget))
        .collect::<Result<_, _>>()?;
    let alpha_fit = reports
        .iter()
        .map(|r| r.alpha_max)
        .fold(f64::INFINITY, f64::min);
    let mut table = Table::new(
        "lengths",
        &[
            "family",
            "w",
            "cap",
            "k",
            "length",
            "upper",
            "upper_ok",
            "lower",
            "lower_ok",
            "alpha_max",
        ],
    );
    for r in &reports {
        let f = &set.families()[r.family];
        table.push(vec![
            r.family.to_string(),
            f.w.to_text(),
            f.cap.to_string(),
            r.k.to_string(),
            r.length.to_string(),
            r.upper.to_string(),
            r.upper_ok.to_string(),
            num(r.lower),
            r.lower_ok.to_string(),
            num(r.alpha_max),
        ]);
    }
    let mut words = Table::new("words", &["word", "x_length", "compressed_length"]);
    let mut word_rows = Vec::new();
    for (i, s) in p.words.iter().enumerate() {
        let w = free_word(rank, s, &format!("$.parameters.words[{i}]"))?;
        let l = compressed_word_length(&w, &set, budget)?;
        words.push(vec![w.to_text(), w.len().to_string(), l.to_string()]);
        word_rows.push(json!({"word": w.to_text(), "x_length": w.len(), "compressed_length": l}));
    }
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| json!({"family": r.family, "k": r.k, "length": r.length, "upper": r.upper, "lower": r.lower,
                        "upper_ok": r.upper_ok, "lower_ok": r.lower_ok, "alpha_max": jnum(r.alpha_max)}))
        .collect();
    let families: Vec<Value> = set
        .families()
        .iter()
        .zip(&ks)
        .map(|(f, k)| json!({"w": f.w.to_text(), "cap": f.cap.to_string(), "axis_k": k}))
        .collect();
    let results = json!({
        "families": families,
        "k_max": p.k_max,
        "axis_k": big_k,
        "alpha_nominal": alpha_nominal,
        "alpha": alpha,
        "alpha_fit": jnum(alpha_fit),
        "alpha_fit_at_least_nominal": alpha_fit >= alpha_nominal,
        "upper_violations": reports.iter().filter(|r| !r.upper_ok).count(),
        "lower_violations": reports.iter().filter(|r| !r.lower_ok).count(),
        "rows": rows,
        "words": word_rows,
    });
    let mut tables = vec![table];
    if !p.words.is_empty() {
        tables.push(words);
    }
    Ok(Outcome { results, tables })
}

pub fn verify(config: &ExperimentConfig, results: &Value, c: &mut Checks) -> Result<(), RunError> {
    let p: Params = config.params()?;
    let set = parse_genset(&p.genset, rank(config)?)?;
    let alpha = f64_at(results, "alpha")?;
    let mut lower_violations = 0;
    let mut upper_violations = 0;
    for (i, row) in array_at(results, "rows")?.iter().enumerate() {
        let at = |k: &str| f64_at(row, k);
        let j = at("family")? as usize;
        let k = at("k")? as u64;
        let fam = set
            .families()
            .get(j)
            .ok_or_else(|| RunError::Verification(vec![format!("rows[{i}]: no family {j}")]))?;
        let l = compressed_word_length(&fam.w.pow(k as i64), &set, config.budgets.length_budget)?;
        c.close(&format!("rows[{i}].length"), at("length")?, l as f64);
        c.close(
            &format!("rows[{i}].upper"),
            at("upper")?,
            fam.cap.ceil_div(k) as f64,
        );
        upper_violations += usize::from(l as u64 > fam.cap.ceil_div(k));
        lower_violations += usize::from((l as f64) < alpha * fam.cap.ratio(k) - 2.0 - 1e-12);
    }
    c.close(
        "upper_violations",
        f64_at(results, "upper_violations")?,
        upper_violations as f64,
    );
    c.close(
        "lower_violations",
        f64_at(results, "lower_violations")?,
        lower_violations as f64,
    );
    Ok(())
}
