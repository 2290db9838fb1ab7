//! Four-point delta of a word-metric ball.

use serde::Deserialize;
use serde_json::{json, Value};

use hypactions_core::group::{BaumslagSolitar, FreeGroup, Group};
use hypactions_core::metric::{
    element_distance, free_word_length, metric_space_from, DeltaEstimate, Length,
};

use super::{array_at, f64_at, Checks};
use crate::bundle::{jnum, num, Outcome, Table};
use crate::config::{ExperimentConfig, GroupSpec};
use crate::error::RunError;
use crate::groups::{bs_lengths, element, standard_ball};
use crate::parallel::{delta_exhaustive, delta_sampled};

#[derive(Debug, Deserialize)]
struct Params {
    radius: usize,
    #[serde(default = "exhaustive")]
    mode: String,
    #[serde(default = "million")]
    samples: u64,
}

fn exhaustive() -> String {
    "exhaustive".into()
}

fn million() -> u64 {
    1_000_000
}

pub fn run(config: &ExperimentConfig) -> Result<Outcome, RunError> {
    let p: Params = config.params()?;
    match config.group {
        Some(GroupSpec::Free { rank }) => {
            scan(config, &p, &FreeGroup::new(rank), &free_word_length)
        }
        Some(GroupSpec::Bs { m, n }) => {
            let g = BaumslagSolitar::new(m, n);
            let len = bs_lengths(&g, 2 * p.radius, config.budgets.ball_cap)?;
            scan(config, &p, &g, &len)
        }
        _ => Err(RunError::invalid("$.group.kind", "delta needs free or bs")),
    }
}

fn estimate(
    space: &hypactions_core::FiniteMetricSpace<f64>,
    p: &Params,
    config: &ExperimentConfig,
) -> Result<DeltaEstimate<f64>, RunError> {
    if p.mode == "sampled" {
        delta_sampled(space, p.samples, config.seed)
    } else {
        delta_exhaustive(space, config.budgets.quadruple_cap)
    }
}

fn scan<G: Group, L: Length<G::Element> + ?Sized>(
    config: &ExperimentConfig,
    p: &Params,
    group: &G,
    len: &L,
) -> Result<Outcome, RunError> {
    let gens = standard_generators(group, config)?;
    let ball = standard_ball(group, &gens, p.radius, config.budgets.ball_cap)?;
    let space = metric_space_from(group, ball.elements(), len)?;
    let est = estimate(&space, p, config)?;
    let mut table = Table::new(
        "delta_by_radius",
        &["radius", "points", "delta", "quadruples"],
    );
    for r in 0..p.radius {
        let k = ball.prefix_radius(r).len();
        let sub = space.restrict(&(0..k).collect::<Vec<_>>());
        let e = estimate(&sub, p, config)?;
        table.push(vec![
            r.to_string(),
            k.to_string(),
            num(e.delta),
            e.quadruples_checked.to_string(),
        ]);
    }
    table.push(vec![
        p.radius.to_string(),
        ball.len().to_string(),
        num(est.delta),
        est.quadruples_checked.to_string(),
    ]);
    let [x, y, z, t] = est.witness;
    let w: Vec<String> = est
        .witness
        .iter()
        .map(|&i| group.render(&ball.elements()[i]))
        .collect();
    let d = |i: usize, j: usize| jnum(space.dist(i, j));
    let results = json!({
        "radius": p.radius,
        "points": ball.len(),
        "mode": p.mode,
        "delta": jnum(est.delta),
        "raw": jnum(est.raw),
        "witness": w,
        "witness_distances": {"xy": d(x, y), "xz": d(x, z), "yz": d(y, z), "xt": d(x, t), "yt": d(y, t), "zt": d(z, t)},
        "quadruples_checked": est.quadruples_checked,
        "seed": est.seed,
    });
    Ok(Outcome {
        results,
        tables: vec![table],
    })
}

pub(crate) fn standard_generators<G: Group>(
    group: &G,
    config: &ExperimentConfig,
) -> Result<Vec<G::Element>, RunError> {
    let names: Vec<String> = match config.group {
        Some(GroupSpec::Free { rank }) => (0..rank)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect(),
        Some(GroupSpec::Bs { .. }) => vec!["a".into(), "t".into()],
        _ => Vec::new(),
    };
    names.iter().map(|s| element(group, s, "$.group")).collect()
}

/// `(min{(x,y)_t, (y,z)_t} − (x,z)_t)` from the six distances.
fn defect(d: [f64; 6]) -> f64 {
    let [xy, xz, yz, xt, yt, zt] = d;
    let p = |a: f64, b: f64, c: f64| 0.5 * (a + b - c);
    p(xt, yt, xy).min(p(yt, zt, yz)) - p(xt, zt, xz)
}

pub fn verify(config: &ExperimentConfig, results: &Value, c: &mut Checks) -> Result<(), RunError> {
    let p: Params = config.params()?;
    let w = array_at(results, "witness")?;
    let names: Vec<&str> = w.iter().filter_map(Value::as_str).collect();
    if names.len() != 4 {
        return Err(RunError::Verification(vec![
            "results.witness: expected four elements".into(),
        ]));
    }
    let recorded: Vec<f64> = ["xy", "xz", "yz", "xt", "yt", "zt"]
        .iter()
        .map(|k| f64_at(results, &format!("witness_distances.{k}")))
        .collect::<Result<_, _>>()?;
    let recomputed = match config.group {
        Some(GroupSpec::Free { rank }) => {
            distances(&FreeGroup::new(rank), &free_word_length, &names)?
        }
        Some(GroupSpec::Bs { m, n }) => {
            let g = BaumslagSolitar::new(m, n);
            distances(
                &g,
                &bs_lengths(&g, 2 * p.radius, config.budgets.ball_cap)?,
                &names,
            )?
        }
        _ => return Err(RunError::invalid("$.group.kind", "delta needs free or bs")),
    };
    for (i, k) in ["xy", "xz", "yz", "xt", "yt", "zt"].iter().enumerate() {
        c.close(&format!("d_{k}"), recorded[i], recomputed[i]);
    }
    let raw = f64_at(results, "raw")?;
    c.close(
        "witness defect",
        raw,
        defect(recomputed.clone().try_into().expect("six distances")),
    );
    c.close("delta", f64_at(results, "delta")?, raw.max(0.0));
    Ok(())
}

fn distances<G: Group, L: Length<G::Element> + ?Sized>(
    group: &G,
    len: &L,
    names: &[&str],
) -> Result<Vec<f64>, RunError> {
    let e: Vec<G::Element> = names
        .iter()
        .enumerate()
        .map(|(i, s)| element(group, s, &format!("results.witness[{i}]")))
        .collect::<Result<_, _>>()?;
    let d = |i: usize, j: usize| element_distance(group, len, &e[i], &e[j]).map_err(RunError::from);
    Ok(vec![
        d(0, 1)?,
        d(0, 2)?,
        d(1, 2)?,
        d(0, 3)?,
        d(1, 3)?,
        d(2, 3)?,
    ])
}
