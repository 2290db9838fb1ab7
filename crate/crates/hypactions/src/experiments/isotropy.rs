//! Sampled isotropy probe on a ball.

use serde::Deserialize;
use serde_json::{json, Value};

use hypactions_core::group::{BaumslagSolitar, FreeGroup, Group};
use hypactions_core::lox::isotropy_probe;
use hypactions_core::metric::{element_distance, free_word_length, Length};

use super::delta::standard_generators;
use super::{f64_at, field, str_at, Checks};
use crate::bundle::Outcome;
use crate::config::{ExperimentConfig, GroupSpec};
use crate::error::RunError;
use crate::groups::{bs_lengths, element, standard_ball};

#[derive(Debug, Deserialize)]
struct Params {
    radius: usize,
    #[serde(default = "one")]
    d: f64,
    #[serde(default = "hundred")]
    samples: usize,
}

fn one() -> f64 {
    1.0
}
fn hundred() -> usize {
    100
}

pub fn run(config: &ExperimentConfig) -> Result<Outcome, RunError> {
    let p: Params = config.params()?;
    match config.group {
        Some(GroupSpec::Free { rank }) => {
            probe(config, &p, &FreeGroup::new(rank), &free_word_length)
        }
        Some(GroupSpec::Bs { m, n }) => {
            let g = BaumslagSolitar::new(m, n);
            // gx and x′ lie within 2r and r of the identity
            let len = bs_lengths(&g, 3 * p.radius, config.budgets.ball_cap)?;
            probe(config, &p, &g, &len)
        }
        _ => Err(RunError::invalid(
            "$.group.kind",
            "isotropy-probe needs free or bs",
        )),
    }
}

fn probe<G: Group, L: Length<G::Element> + ?Sized>(
    config: &ExperimentConfig,
    p: &Params,
    group: &G,
    len: &L,
) -> Result<Outcome, RunError> {
    let ball = standard_ball(
        group,
        &standard_generators(group, config)?,
        p.radius,
        config.budgets.ball_cap,
    )?;
    let rep = isotropy_probe(group, &ball, len, p.d, p.samples, config.seed);
    let r = |x: &G::Element| group.render(x);
    let hardest = rep.hardest.as_ref().map(|t| {
        json!({"x": r(&t.x), "y": r(&t.y), "x2": r(&t.x2), "y2": r(&t.y2), "best_g": t.best_g.as_ref().map(r),
               "best_value": t.best_value, "success": t.success})
    });
    let results = json!({
        "points": ball.len(),
        "d": rep.d,
        "seed": rep.seed,
        "trials": rep.trials,
        "successes": rep.successes,
        "success_rate": rep.success_rate,
        "hardest": hardest,
    });
    Ok(Outcome {
        results,
        tables: Vec::new(),
    })
}

pub fn verify(config: &ExperimentConfig, results: &Value, c: &mut Checks) -> Result<(), RunError> {
    let p: Params = config.params()?;
    if field(results, "hardest")?.is_null() {
        c.close("trials", f64_at(results, "trials")?, 0.0);
        return Ok(());
    }
    match config.group {
        Some(GroupSpec::Free { rank }) => {
            recheck(&FreeGroup::new(rank), &free_word_length, results, c)
        }
        Some(GroupSpec::Bs { m, n }) => {
            let g = BaumslagSolitar::new(m, n);
            recheck(
                &g,
                &bs_lengths(&g, 3 * p.radius, config.budgets.ball_cap)?,
                results,
                c,
            )
        }
        _ => Err(RunError::invalid(
            "$.group.kind",
            "isotropy-probe needs free or bs",
        )),
    }
}

fn recheck<G: Group, L: Length<G::Element> + ?Sized>(
    group: &G,
    len: &L,
    results: &Value,
    c: &mut Checks,
) -> Result<(), RunError> {
    let e = |k: &str| -> Result<G::Element, RunError> {
        element(
            group,
            str_at(results, &format!("hardest.{k}"))?,
            &format!("results.hardest.{k}"),
        )
    };
    let (x, y, x2, y2) = (e("x")?, e("y")?, e("x2")?, e("y2")?);
    let d =
        |a: &G::Element, b: &G::Element| element_distance(group, len, a, b).map_err(RunError::from);
    c.close("equidistant pairs", d(&x, &y)?, d(&x2, &y2)?);
    if !field(results, "hardest.best_g")?.is_null() {
        let g = e("best_g")?;
        let v = d(&group.multiply(&g, &x), &x2)?.max(d(&group.multiply(&g, &y), &y2)?);
        c.close(
            "hardest best value",
            f64_at(results, "hardest.best_value")?,
            v,
        );
        let success = field(results, "hardest.success")?
            .as_bool()
            .unwrap_or(false);
        c.check(success == (v <= f64_at(results, "d")? + 1e-12), || {
            "hardest success flag".into()
        });
    }
    Ok(())
}
