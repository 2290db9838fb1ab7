//! Two real embeddings of a quadratic field acting on the hyperbolic plane.

use serde::Deserialize;
use serde_json::{json, Value};

use hypactions_core::sl2::{
    classify, embedding_spectrum_compare, lemma_emb_matrix, translation_length_h2, Class, Mat2,
    Quad, RealEmbedding, Sl2Error, Sl2Group, DEFAULT_TOL,
};

use super::{array_at, f64_at, str_at, Checks};
use crate::bundle::{num, Outcome, Table};
use crate::config::ExperimentConfig;
use crate::error::RunError;
use crate::groups::sl2;

#[derive(Debug, Deserialize)]
struct Params {
    x: Option<String>,
    #[serde(default = "one")]
    radius: usize,
    #[serde(default)]
    generators: Vec<Value>,
    #[serde(default = "plus")]
    e1: String,
    #[serde(default = "minus")]
    e2: String,
}

fn one() -> usize {
    1
}
fn plus() -> String {
    "+".into()
}
fn minus() -> String {
    "-".into()
}

fn embedding(s: &str) -> RealEmbedding {
    if s == "-" {
        RealEmbedding::MINUS
    } else {
        RealEmbedding::PLUS
    }
}

fn entry(v: &Value, d: i64, path: &str) -> Result<Quad, RunError> {
    let bad = |e: Sl2Error| RunError::invalid(path, e);
    match v {
        Value::String(s) => Quad::parse(s, d).map_err(bad),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Quad::int(i, d).map_err(bad),
            None => Err(RunError::invalid(
                path,
                "non-integer numbers are not exact; write \"p/q\"",
            )),
        },
        Value::Object(o) => {
            let part = |k: &str| match o.get(k) {
                None => Ok("0".to_string()),
                Some(Value::String(s)) => Ok(s.clone()),
                Some(Value::Number(n)) if n.is_i64() => Ok(n.to_string()),
                Some(other) => Err(RunError::invalid(
                    &format!("{path}.{k}"),
                    format!("expected a rational, found {other}"),
                )),
            };
            if let Some(k) = o.keys().find(|k| *k != "a" && *k != "b") {
                return Err(RunError::invalid(&format!("{path}.{k}"), "unknown field"));
            }
            Quad::from_pair(&part("a")?, &part("b")?, d).map_err(bad)
        }
        other => Err(RunError::invalid(
            path,
            format!("expected an entry, found {other}"),
        )),
    }
}

fn generator(group: &Sl2Group, v: &Value, path: &str) -> Result<Mat2, RunError> {
    match v {
        Value::String(s) => group
            .parse_matrix(s)
            .map_err(|e| RunError::invalid(path, e)),
        Value::Array(rows)
            if rows.len() == 2
                && rows
                    .iter()
                    .all(|r| r.as_array().is_some_and(|r| r.len() == 2)) =>
        {
            let mut e = Vec::new();
            for (i, r) in rows.iter().enumerate() {
                for (j, x) in r.as_array().expect("checked").iter().enumerate() {
                    e.push(entry(x, group.field(), &format!("{path}[{i}][{j}]"))?);
                }
            }
            let mut e = e.into_iter();
            let mut next = || e.next().expect("four entries");
            Mat2::new(next(), next(), next(), next()).map_err(|e| RunError::invalid(path, e))
        }
        other => Err(RunError::invalid(
            path,
            format!("expected \"[[a, b], [c, d]]\" or a 2x2 array, found {other}"),
        )),
    }
}

struct Setup {
    d: i64,
    x: Quad,
    matrix: Mat2,
    gens: Vec<Mat2>,
    e1: RealEmbedding,
    e2: RealEmbedding,
}

fn setup(config: &ExperimentConfig, p: &Params) -> Result<Setup, RunError> {
    let group = sl2(&config.group)?;
    let d = group.field();
    let text = p.x.clone().unwrap_or_else(|| format!("sqrt{d}-1"));
    let x = Quad::parse(&text, d).map_err(|e| RunError::invalid("$.parameters.x", e))?;
    let matrix = lemma_emb_matrix(&x)?;
    let mut gens = vec![matrix.clone()];
    for (i, g) in p.generators.iter().enumerate() {
        gens.push(generator(
            &group,
            g,
            &format!("$.parameters.generators[{i}]"),
        )?);
    }
    Ok(Setup {
        d,
        x,
        matrix,
        gens,
        e1: embedding(&p.e1),
        e2: embedding(&p.e2),
    })
}

fn tau_json(m: &Mat2, e: RealEmbedding) -> Result<Value, RunError> {
    match translation_length_h2(m, e, DEFAULT_TOL) {
        Ok(iv) => Ok(json!({"lo": iv.lo, "hi": iv.hi, "mid": iv.mid()})),
        Err(Sl2Error::NotLoxodromic(_)) => Ok(Value::Null),
        Err(e) => Err(e.into()),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn run(config: &ExperimentConfig) -> Result<Outcome, RunError> {
    let p: Params = config.params()?;
    let s = setup(config, &p)?;
    let report =
        embedding_spectrum_compare(&s.gens, s.e1, s.e2, p.radius, config.budgets.ball_cap)?;
    let mut table = Table::new(
        "spectrum",
        &["word", "trace", "class_e1", "class_e2", "tau_e1", "tau_e2"],
    );
    for r in &report.rows {
        table.push(vec![
            r.word.clone(),
            r.trace.clone(),
            r.class1.to_string(),
            r.class2.to_string(),
            opt(r.tau1),
            opt(r.tau2),
        ]);
    }
    let witnesses: Vec<Value> = report
        .witnesses
        .iter()
        .map(|&i| {
            let r = &report.rows[i];
            json!({"word": r.word, "trace": r.trace, "class_e1": r.class1, "class_e2": r.class2, "tau_e1": r.tau1, "tau_e2": r.tau2})
        })
        .collect();
    let square = s.matrix.mul(&s.matrix);
    let ix = |e: RealEmbedding| -> Result<Value, RunError> {
        let iv = s.x.interval(e, DEFAULT_TOL)?;
        Ok(json!({"lo": iv.lo, "hi": iv.hi}))
    };
    let (c1, c2) = (classify(&s.matrix, s.e1), classify(&s.matrix, s.e2));
    let results = json!({
        "field": s.d,
        "e1": p.e1,
        "e2": p.e2,
        "x": s.x.to_string(),
        "x_e1": ix(s.e1)?,
        "x_e2": ix(s.e2)?,
        "matrix": s.matrix.to_string(),
        "trace": s.matrix.trace().to_string(),
        "class_e1": c1,
        "class_e2": c2,
        "split": c1 != c2,
        "tau_e1": tau_json(&s.matrix, s.e1)?,
        "tau_e2": tau_json(&s.matrix, s.e2)?,
        "tau_square_e1": tau_json(&square, s.e1)?,
        "tau_square_e2": tau_json(&square, s.e2)?,
        "generators": s.gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "radius": p.radius,
        "rows": report.rows.len(),
        "witnesses": witnesses,
    });
    Ok(Outcome {
        results,
        tables: vec![table],
    })
}

/// Product of the generators spelled by `word` (`1` is the identity).
fn word_matrix(gens: &[Mat2], d: i64, word: &str) -> Result<Mat2, RunError> {
    let mut m = Mat2::identity(d)?;
    if word == "1" {
        return Ok(m);
    }
    for ch in word.chars() {
        let i = (ch.to_ascii_lowercase() as u32).wrapping_sub('a' as u32) as usize;
        let g = gens.get(i).ok_or_else(|| {
            RunError::Verification(vec![format!("word {word}: no generator '{ch}'")])
        })?;
        m = m.mul(&if ch.is_ascii_uppercase() {
            g.inverse()
        } else {
            g.clone()
        });
    }
    Ok(m)
}

fn class_of(v: &Value, path: &str) -> Result<Class, RunError> {
    serde_json::from_value(v.clone())
        .map_err(|e| RunError::Verification(vec![format!("results.{path}: {e}")]))
}

pub fn verify(config: &ExperimentConfig, results: &Value, c: &mut Checks) -> Result<(), RunError> {
    let p: Params = config.params()?;
    let s = setup(config, &p)?;
    c.check(
        str_at(results, "trace")? == s.matrix.trace().to_string(),
        || "trace of the split matrix".into(),
    );
    for (k, e) in [("e1", s.e1), ("e2", s.e2)] {
        let recorded = class_of(&results[format!("class_{k}")], &format!("class_{k}"))?;
        c.check(recorded == classify(&s.matrix, e), || {
            format!("class of the split matrix under {k}")
        });
        if !results[format!("tau_{k}")].is_null() {
            let iv = translation_length_h2(&s.matrix, e, DEFAULT_TOL)?;
            c.close(
                &format!("tau_{k}"),
                f64_at(results, &format!("tau_{k}.mid"))?,
                iv.mid(),
            );
        }
    }
    for (i, w) in array_at(results, "witnesses")?.iter().enumerate() {
        let word = str_at(w, "word")?;
        let m = word_matrix(&s.gens, s.d, word)?;
        c.check(str_at(w, "trace")? == m.trace().to_string(), || {
            format!("witnesses[{i}]: trace of {word}")
        });
        let (c1, c2) = (
            class_of(&w["class_e1"], "class_e1")?,
            class_of(&w["class_e2"], "class_e2")?,
        );
        c.check(
            c1 == classify(&m, s.e1) && c2 == classify(&m, s.e2) && c1 != c2,
            || format!("witnesses[{i}]: classes of {word}"),
        );
    }
    Ok(())
}
