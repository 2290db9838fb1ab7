//! Cone-off of a ball along a cyclic orbit.

use serde::Deserialize;
use serde_json::{json, Value};

use hypactions_core::group::{Ball, BaumslagSolitar, FreeGroup, Group};
use hypactions_core::metric::{cone_off_ball, distances_from, FiniteMetricSpace};

use super::delta::standard_generators;
use super::{array_at, f64_at, Checks};
use crate::bundle::{Outcome, Table};
use crate::config::{ExperimentConfig, GroupSpec};
use crate::error::RunError;
use crate::groups::{element, standard_ball};
use crate::parallel::delta_sampled;

#[derive(Debug, Deserialize)]
struct Params {
    g: String,
    radius: usize,
    #[serde(default = "one")]
    a: f64,
    orbit_range: Option<usize>,
}

fn one() -> f64 {
    1.0
}

/// Samples drawn for the before and after delta estimates.
const SAMPLES: u64 = 100_000;

pub fn run(config: &ExperimentConfig) -> Result<Outcome, RunError> {
    match config.group {
        Some(GroupSpec::Free { rank }) => cone(config, &FreeGroup::new(rank)),
        Some(GroupSpec::Bs { m, n }) => cone(config, &BaumslagSolitar::new(m, n)),
        _ => Err(RunError::invalid(
            "$.group.kind",
            "cone-off needs free or bs",
        )),
    }
}

struct Setup<E> {
    ball: Ball<E>,
    orbit: Vec<E>,
    skipped: usize,
}

fn setup<G: Group>(
    config: &ExperimentConfig,
    group: &G,
    p: &Params,
) -> Result<Setup<G::Element>, RunError> {
    let g = element(group, &p.g, "$.parameters.g")?;
    let ball = standard_ball(
        group,
        &standard_generators(group, config)?,
        p.radius,
        config.budgets.ball_cap,
    )?;
    let k = p.orbit_range.unwrap_or(p.radius) as i64;
    let mut orbit = Vec::new();
    let mut skipped = 0;
    for i in -k..=k {
        let x = group.pow(&g, i);
        if ball.contains(&x) {
            if !orbit.contains(&x) {
                orbit.push(x);
            }
        } else {
            skipped += 1;
        }
    }
    Ok(Setup {
        ball,
        orbit,
        skipped,
    })
}

fn cone<G: Group>(config: &ExperimentConfig, group: &G) -> Result<Outcome, RunError> {
    let p: Params = config.params()?;
    let s = setup(config, group, &p)?;
    let c = cone_off_ball(group, &s.ball, &s.orbit, p.a)?;
    let els = s.ball.elements();
    let mut table = Table::new("edges", &["x", "y", "orbit_distance_x", "orbit_distance_y"]);
    let mut violations = 0;
    let mut edges = Vec::new();
    for &(x, y) in &c.new_edges {
        let (dx, dy) = (c.orbit_distance[x], c.orbit_distance[y]);
        violations += usize::from(!(dx as f64 > p.a && dy as f64 > p.a));
        table.push(vec![
            group.render(&els[x]),
            group.render(&els[y]),
            dx.to_string(),
            dy.to_string(),
        ]);
        edges.push(json!([group.render(&els[x]), group.render(&els[y])]));
    }
    let adj = s.ball.graph(group);
    let rows: Vec<Vec<u32>> = (0..els.len()).map(|x| distances_from(&adj, &[x])).collect();
    let before = FiniteMetricSpace::from_fn_unchecked(els.len(), |i, j| rows[i][j] as f64);
    let diam = |m: &FiniteMetricSpace<f64>| {
        (0..m.size())
            .flat_map(|i| m.row(i).to_vec())
            .fold(0.0, f64::max)
    };
    let d0 = delta_sampled(&before, SAMPLES, config.seed)?;
    let d1 = delta_sampled(&c.space, SAMPLES, config.seed)?;
    let results = json!({
        "points": els.len(),
        "a": p.a,
        "orbit": s.orbit.iter().map(|x| group.render(x)).collect::<Vec<_>>(),
        "orbit_outside_ball": s.skipped,
        "new_edges": c.new_edges.len(),
        "violations": violations,
        "boundary_pairs": c.boundary_pairs,
        "boundary_warning": c.boundary_warning(),
        "diameter_before": diam(&before),
        "diameter_after": diam(&c.space),
        "delta_sampled_before": d0.delta,
        "delta_sampled_after": d1.delta,
        "samples": SAMPLES,
        "edges": edges,
    });
    Ok(Outcome {
        results,
        tables: vec![table],
    })
}

pub fn verify(config: &ExperimentConfig, results: &Value, c: &mut Checks) -> Result<(), RunError> {
    match config.group {
        Some(GroupSpec::Free { rank }) => recheck(config, &FreeGroup::new(rank), results, c),
        Some(GroupSpec::Bs { m, n }) => recheck(config, &BaumslagSolitar::new(m, n), results, c),
        _ => Err(RunError::invalid(
            "$.group.kind",
            "cone-off needs free or bs",
        )),
    }
}

fn recheck<G: Group>(
    config: &ExperimentConfig,
    group: &G,
    results: &Value,
    c: &mut Checks,
) -> Result<(), RunError> {
    let p: Params = config.params()?;
    let s = setup(config, group, &p)?;
    let adj = s.ball.graph(group);
    let idx: Vec<usize> = s.orbit.iter().filter_map(|o| s.ball.index_of(o)).collect();
    let to_orbit = distances_from(&adj, &idx);
    let edges = array_at(results, "edges")?;
    let mut violations = 0;
    for (i, e) in edges.iter().enumerate() {
        let name = |k: usize| e.get(k).and_then(Value::as_str).unwrap_or("");
        let x = element(group, name(0), &format!("results.edges[{i}][0]"))?;
        let y = element(group, name(1), &format!("results.edges[{i}][1]"))?;
        let (Some(ix), Some(iy)) = (s.ball.index_of(&x), s.ball.index_of(&y)) else {
            c.check(false, || format!("edges[{i}]: endpoint outside the ball"));
            continue;
        };
        c.check(!adj[ix].contains(&iy) && ix != iy, || {
            format!("edges[{i}]: endpoints already adjacent")
        });
        violations += usize::from(!(to_orbit[ix] as f64 > p.a && to_orbit[iy] as f64 > p.a));
    }
    c.close(
        "new_edges",
        f64_at(results, "new_edges")?,
        edges.len() as f64,
    );
    c.close(
        "violations",
        f64_at(results, "violations")?,
        violations as f64,
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(params: Value) -> ExperimentConfig {
        ExperimentConfig::from_value(&json!({"group": {"kind": "free", "rank": 2}, "experiment": "cone-off", "parameters": params}))
            .unwrap()
    }

    #[test]
    fn added_edges_avoid_the_orbit() {
        let c = cfg(json!({"g": "a", "radius": 3}));
        let out = run(&c).unwrap();
        assert_eq!(out.results["violations"], json!(0));
        assert!(out.results["new_edges"].as_u64().unwrap() > 0);
        assert_eq!(out.results["orbit"].as_array().unwrap().len(), 7);
        let mut checks = Checks::default();
        verify(&c, &out.results, &mut checks).unwrap();
        assert!(checks.failures.is_empty(), "{:?}", checks.failures);
    }

    #[test]
    fn orbit_points_outside_the_ball_are_counted() {
        let out = run(&cfg(json!({"g": "ab", "radius": 2, "orbit_range": 3}))).unwrap();
        // (ab)^±2 and (ab)^±3 have length ≥ 4
        assert_eq!(out.results["orbit_outside_ball"], json!(4));
    }
}
