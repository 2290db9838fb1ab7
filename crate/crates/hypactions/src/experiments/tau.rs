//! Translation lengths from horizon traces, with exact values where known.

use serde::Deserialize;
use serde_json::{json, Value};

use hypactions_core::group::{BaumslagSolitar, FreeGroup, Group};
use hypactions_core::lox::{
    classify_bass_serre, classify_free, translation_length_bass_serre, translation_length_estimate,
    translation_length_exact_free,
};
use hypactions_core::metric::{free_word_length, Length};
use hypactions_core::quasimorphism::bs_t_length;

use super::{array_at, f64_at, str_at, Checks};
use crate::bundle::{num, Outcome, Table};
use crate::config::{ExperimentConfig, GroupSpec};
use crate::error::RunError;
use crate::groups::{element, free_word};

#[derive(Debug, Deserialize)]
struct Params {
    g: String,
    #[serde(default = "eight")]
    horizon: usize,
}

fn eight() -> usize {
    8
}

pub fn run(config: &ExperimentConfig) -> Result<Outcome, RunError> {
    let p: Params = config.params()?;
    if p.horizon == 0 {
        return Err(RunError::invalid(
            "$.parameters.horizon",
            "must be positive",
        ));
    }
    let (lengths, class, exact, length_name) = match config.group {
        Some(GroupSpec::Free { rank }) => {
            let g = free_word(rank, &p.g, "$.parameters.g")?;
            let est = translation_length_estimate(
                &FreeGroup::new(rank),
                &g,
                &free_word_length,
                p.horizon,
            )?;
            (
                est,
                classify_free(&g, p.horizon),
                translation_length_exact_free(&g),
                "word",
            )
        }
        Some(GroupSpec::Bs { m, n }) => {
            let group = BaumslagSolitar::new(m, n);
            let g = element(&group, &p.g, "$.parameters.g")?;
            let est = translation_length_estimate(&group, &g, &bs_t_length, p.horizon)?;
            (
                est,
                classify_bass_serre(&group, &g, p.horizon),
                translation_length_bass_serre(&group, &g),
                "t_syllables",
            )
        }
        _ => return Err(RunError::invalid("$.group.kind", "tau needs free or bs")),
    };
    let mut table = Table::new("trace", &["n", "length", "ratio"]);
    for (i, (l, r)) in lengths.lengths.iter().zip(&lengths.trace).enumerate() {
        table.push(vec![(i + 1).to_string(), num(*l), num(*r)]);
    }
    // |gⁿ| = nτ + c with c = |g| − τ, exact on trees
    let c = lengths.lengths[0] - exact as f64;
    let law = lengths
        .lengths
        .iter()
        .enumerate()
        .all(|(i, &l)| l == (i + 1) as f64 * exact as f64 + c);
    let results = json!({
        "g": p.g,
        "horizon": p.horizon,
        "length": length_name,
        "upper": lengths.upper,
        "lengths": lengths.lengths,
        "trace": lengths.trace,
        "tau_exact": exact,
        "affine_law": law,
        "class": serde_json::to_value(&class).expect("serializable"),
    });
    Ok(Outcome {
        results,
        tables: vec![table],
    })
}

fn powers<G: Group, L: Length<G::Element> + ?Sized>(
    group: &G,
    g: &G::Element,
    len: &L,
    h: usize,
) -> Result<Vec<f64>, RunError> {
    (1..=h as i64)
        .map(|n| {
            let x = group.pow(g, n);
            len.length(&x)
                .ok_or_else(|| RunError::Failed(format!("no length for {}", group.render(&x))))
        })
        .collect()
}

pub fn verify(config: &ExperimentConfig, results: &Value, c: &mut Checks) -> Result<(), RunError> {
    let g = str_at(results, "g")?;
    let h = array_at(results, "lengths")?.len();
    let (lengths, exact) = match config.group {
        Some(GroupSpec::Free { rank }) => {
            let w = free_word(rank, g, "results.g")?;
            (
                powers(&FreeGroup::new(rank), &w, &free_word_length, h)?,
                translation_length_exact_free(&w),
            )
        }
        Some(GroupSpec::Bs { m, n }) => {
            let group = BaumslagSolitar::new(m, n);
            let x = element(&group, g, "results.g")?;
            (
                powers(&group, &x, &bs_t_length, h)?,
                translation_length_bass_serre(&group, &x),
            )
        }
        _ => return Err(RunError::invalid("$.group.kind", "tau needs free or bs")),
    };
    for (i, l) in lengths.iter().enumerate() {
        c.close(
            &format!("length of g^{}", i + 1),
            f64_at(results, &format!("lengths.{i}"))?,
            *l,
        );
    }
    let upper = lengths
        .iter()
        .enumerate()
        .map(|(i, l)| l / (i + 1) as f64)
        .fold(f64::INFINITY, f64::min);
    c.close("upper", f64_at(results, "upper")?, upper);
    c.close("tau_exact", f64_at(results, "tau_exact")?, exact as f64);
    c.check(upper + 1e-12 >= exact as f64, || {
        format!("upper {upper} below exact {exact}")
    });
    Ok(())
}
