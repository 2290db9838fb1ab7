//! Injective hull of a finite metric space: Kuratowski images, projections
//! of random admissible functions, and the hyperbolicity of the sample.

use std::path::Path;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use hypactions_core::metric::{four_point_delta, quadruple_count, DeltaMode, FiniteMetricSpace};
use hypactions_core::tight_span::{
    check_admissible, hull_sample_delta, is_extremal, kuratowski_embed, lower_to_hull,
    project_to_hull, sup_distance, TightSpanError, DEFAULT_MAX_ITER, DEFAULT_SLACK,
};

use super::{array_at, f64_at, field, Checks};
use crate::bundle::{num, Outcome, Table};
use crate::config::ExperimentConfig;
use crate::error::RunError;

pub type Q = Ratio<i64>;

#[derive(Debug, Deserialize)]
struct Params {
    metric: Option<Vec<Vec<Value>>>,
    metric_csv: Option<String>,
    #[serde(default = "hundred")]
    starts: usize,
    #[serde(default = "slack")]
    tol: f64,
    #[serde(default = "iters")]
    max_iter: usize,
    #[serde(default)]
    exact: bool,
}

fn hundred() -> usize {
    100
}
fn slack() -> f64 {
    DEFAULT_SLACK
}
fn iters() -> usize {
    DEFAULT_MAX_ITER
}

/// `p/q`, an integer, or a finite decimal, read exactly.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let q: i64 = q.trim().parse().ok()?;
        let p: i64 = p.trim().parse().ok()?;
        return (q != 0).then(|| Q::new(p, q));
    }
    let (neg, body) = s.strip_prefix('-').map_or((false, s), |b| (true, b));
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let den = 10i64.checked_pow(frac.len() as u32)?;
    let digits: i64 = format!("{int}{frac}").parse().ok()?;
    let v = Q::new(digits, den);
    Some(if neg { -v } else { v })
}

fn cell(v: &Value, path: &str) -> Result<Q, String> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => {
            return Err(format!(
                "{path}: expected a number or \"p/q\", found {other}"
            ))
        }
    };
    parse_rational(&text)
        .ok_or_else(|| format!("{path}: cannot read \"{text}\" as an exact rational"))
}

fn load(p: &Params, base: &Path) -> Result<FiniteMetricSpace<Q>, RunError> {
    let (rows, prefix): (Vec<Vec<Value>>, String) = match (&p.metric, &p.metric_csv) {
        (Some(m), None) => (m.clone(), "$.parameters.metric".into()),
        (None, Some(f)) => {
            let path = base.join(f);
            let text = std::fs::read_to_string(&path).map_err(|e| RunError::io(&path, e))?;
            let rows = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| {
                    l.split(',')
                        .map(|c| Value::String(c.trim().to_string()))
                        .collect()
                })
                .collect();
            (rows, format!("{}", path.display()))
        }
        _ => {
            return Err(RunError::invalid(
                "$.parameters",
                "give exactly one of metric, metric_csv",
            ))
        }
    };
    let mut errors = Vec::new();
    let mut out = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut row = Vec::new();
        for (j, v) in r.iter().enumerate() {
            match cell(v, &format!("{prefix}[{i}][{j}]")) {
                Ok(q) => row.push(q),
                Err(e) => errors.push(e),
            }
        }
        out.push(row);
    }
    if !errors.is_empty() {
        return Err(RunError::Validation(errors));
    }
    FiniteMetricSpace::from_matrix(out).map_err(|e| RunError::invalid(&prefix, e))
}

fn to_f64(q: &Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn to_f64_space(s: &FiniteMetricSpace<Q>) -> FiniteMetricSpace<f64> {
    FiniteMetricSpace::from_fn_unchecked(s.size(), |i, j| to_f64(&s.dist(i, j)))
}

/// `ι(p) + u` with `u ≥ 0` in eighths, so admissible and exactly representable.
fn random_starts(space: &FiniteMetricSpace<Q>, count: usize, seed: u64) -> Vec<Vec<Q>> {
    let n = space.size();
    let diam = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| space.dist(i, j))
        .max()
        .unwrap_or_default();
    let top = diam.ceil().to_integer().max(1) * 8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let p = rng.gen_range(0..n);
            kuratowski_embed(space, p)
                .into_iter()
                .map(|d| d + Q::new(rng.gen_range(0..=top), 8))
                .collect()
        })
        .collect()
}

fn delta_mode(n: usize, cap: u64, seed: u64) -> DeltaMode {
    if quadruple_count(n) <= cap {
        DeltaMode::Exhaustive { cap }
    } else {
        DeltaMode::Sampled {
            count: 1_000_000,
            seed,
        }
    }
}

pub fn run(config: &ExperimentConfig, base: &Path) -> Result<Outcome, RunError> {
    let p: Params = config.params()?;
    let exact = load(&p, base)?;
    let n = exact.size();
    let space = to_f64_space(&exact);

    let mut kur_violations = 0;
    let mut kur_err = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            if p.exact {
                let d = sup_distance(&kuratowski_embed(&exact, i), &kuratowski_embed(&exact, j));
                kur_violations += usize::from(d != exact.dist(i, j));
            } else {
                let e = (sup_distance(&kuratowski_embed(&space, i), &kuratowski_embed(&space, j))
                    - space.dist(i, j))
                .abs();
                kur_err = kur_err.max(e);
                kur_violations += usize::from(e > 1e-12);
            }
        }
    }

    let starts = random_starts(&exact, p.starts, config.seed);
    let projections: Vec<Result<_, TightSpanError>> = starts
        .par_iter()
        .map(|f| {
            project_to_hull(
                &space,
                &f.iter().map(to_f64).collect::<Vec<_>>(),
                p.tol,
                p.max_iter,
            )
        })
        .collect();
    let mut table = Table::new(
        "projections",
        &["start", "iterations", "slack", "converged", "values"],
    );
    let mut projected = Vec::new();
    let mut failed = 0;
    let mut max_iter = 0;
    let mut max_slack = 0.0f64;
    for (i, r) in projections.into_iter().enumerate() {
        match r {
            Ok(pr) => {
                max_iter = max_iter.max(pr.iterations);
                max_slack = max_slack.max(pr.slack);
                let vals = pr
                    .values
                    .iter()
                    .map(|v| num(*v))
                    .collect::<Vec<_>>()
                    .join(" ");
                table.push(vec![
                    i.to_string(),
                    pr.iterations.to_string(),
                    num(pr.slack),
                    "true".into(),
                    vals,
                ]);
                projected.push(pr.values);
            }
            Err(TightSpanError::NoConvergence { iterations, slack }) => {
                failed += 1;
                max_slack = max_slack.max(slack);
                table.push(vec![
                    i.to_string(),
                    iterations.to_string(),
                    num(slack),
                    "false".into(),
                    String::new(),
                ]);
            }
            Err(e) => return Err(e.into()),
        }
    }

    let lowering = if p.exact {
        let mut extremal = 0;
        for f in &starts {
            let g = lower_to_hull(&exact, f)?;
            extremal += usize::from(is_extremal(&exact, &g, Q::from_integer(0))?.extremal);
        }
        json!({"starts": starts.len(), "extremal": extremal})
    } else {
        Value::Null
    };

    let mut sample: Vec<Vec<f64>> = (0..n).map(|x| kuratowski_embed(&space, x)).collect();
    sample.extend(projected.iter().cloned());
    let cap = config.budgets.quadruple_cap;
    let hull = hull_sample_delta(
        &space,
        &sample,
        p.tol.max(1e-12) * 4.0,
        delta_mode(sample.len(), cap, config.seed),
    )?;
    let base_delta = four_point_delta(&space, delta_mode(n, cap, config.seed))?;
    let results = json!({
        "points": n,
        "metric": (0..n).map(|i| (0..n).map(|j| exact.dist(i, j).to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "exact": p.exact,
        "kuratowski": {"pairs": n * n.saturating_sub(1) / 2, "violations": kur_violations, "max_error": kur_err},
        "projection": {"starts": p.starts, "converged": projected.len(), "failed": failed, "tol": p.tol,
                       "max_iterations": max_iter, "max_slack": max_slack, "seed": config.seed},
        "starts": starts.iter().map(|f| f.iter().map(|q| q.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "projected": projected,
        "lowering": lowering,
        "space_delta": {"delta": base_delta.delta, "witness": base_delta.witness, "sampled": base_delta.sampled},
        "hull_delta": {"delta": hull.delta, "raw": hull.raw, "witness": hull.witness, "sample": sample.len(),
                       "sampled": hull.sampled, "quadruples_checked": hull.quadruples_checked},
    });
    Ok(Outcome {
        results,
        tables: vec![table],
    })
}

fn defect(f: &[&[f64]; 4]) -> f64 {
    let d = |i: usize, j: usize| sup_distance(f[i], f[j]);
    let g = |a: usize, b: usize, t: usize| 0.5 * (d(a, t) + d(b, t) - d(a, b));
    g(0, 1, 3).min(g(1, 2, 3)) - g(0, 2, 3)
}

pub fn verify(config: &ExperimentConfig, results: &Value, c: &mut Checks) -> Result<(), RunError> {
    let p: Params = config.params()?;
    // an inline metric is re-read from the config; a file metric from its recorded copy
    let exact = match p.metric {
        Some(_) => load(&p, Path::new("."))?,
        None => {
            let rows: Vec<Vec<Value>> =
                serde_json::from_value(field(results, "metric")?.clone())
                    .map_err(|e| RunError::Verification(vec![format!("results.metric: {e}")]))?;
            let recorded = Params {
                metric: Some(rows),
                metric_csv: None,
                ..p
            };
            load(&recorded, Path::new("."))?
        }
    };
    let space = to_f64_space(&exact);
    let n = space.size();
    let mut violations = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            let d = sup_distance(&kuratowski_embed(&exact, i), &kuratowski_embed(&exact, j));
            violations += usize::from(d != exact.dist(i, j));
        }
    }
    c.close(
        "kuratowski violations",
        f64_at(results, "kuratowski.violations")?,
        violations as f64,
    );
    let tol = f64_at(results, "projection.tol")?;
    let starts = array_at(results, "starts")?;
    let projected: Vec<Vec<f64>> = serde_json::from_value(field(results, "projected")?.clone())
        .map_err(|e| RunError::Verification(vec![format!("results.projected: {e}")]))?;
    for (i, f) in projected.iter().enumerate() {
        let admissible = check_admissible(&space, f, 1e-9).is_ok();
        let e = is_extremal(&space, f, tol * 4.0)?;
        c.check(admissible && e.extremal, || {
            format!("projected[{i}]: slack {}", e.slack)
        });
    }
    // converged projections are listed in start order
    let converged = f64_at(results, "projection.converged")? as usize;
    c.check(
        converged == projected.len()
            && starts.len() == f64_at(results, "projection.starts")? as usize,
        || "projection counts".into(),
    );
    let mut sample: Vec<Vec<f64>> = (0..n).map(|x| kuratowski_embed(&space, x)).collect();
    sample.extend(projected);
    let w: Vec<usize> = serde_json::from_value(field(results, "hull_delta.witness")?.clone())
        .map_err(|e| RunError::Verification(vec![format!("results.hull_delta.witness: {e}")]))?;
    if w.len() == 4 && w.iter().all(|&i| i < sample.len()) {
        let pts = [
            &sample[w[0]][..],
            &sample[w[1]][..],
            &sample[w[2]][..],
            &sample[w[3]][..],
        ];
        c.close(
            "hull delta witness",
            f64_at(results, "hull_delta.raw")?,
            defect(&pts),
        );
    } else {
        c.check(false, || {
            "hull_delta.witness: four indices into the sample expected".into()
        });
    }
    Ok(())
}
