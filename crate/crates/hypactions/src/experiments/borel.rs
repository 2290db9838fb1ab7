//! Order preservation of the prefix map `r ↦ f(r)` and the quasi-order laws
//! of the sup-difference comparator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use hypactions_core::compression::{
    make_bf_family, order_preservation_check, overlap_surrogates, qks_compare, OrderReport,
    PiConfig, PiPrefix,
};
use hypactions_core::group::FreeGroup;

use super::{array_at, f64_at, Checks};
use crate::bundle::{num, Outcome, Table};
use crate::config::{ExperimentConfig, GroupSpec};
use crate::error::RunError;
use crate::groups::{free_word, standard_ball};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Bf {
    #[serde(default = "a")]
    f1: String,
    #[serde(default = "b")]
    f2: String,
    #[serde(default = "three")]
    c: u64,
    count: Option<usize>,
    #[serde(default = "two")]
    window: usize,
    #[serde(default = "two")]
    margin: u64,
    #[serde(default)]
    r: f64,
    #[serde(default = "three_usize")]
    translates_radius: usize,
}

fn a() -> String {
    "a".into()
}
fn b() -> String {
    "b".into()
}
fn three() -> u64 {
    3
}
fn three_usize() -> usize {
    3
}
fn two<T: From<u8>>() -> T {
    T::from(2)
}

#[derive(Debug, Deserialize)]
struct Params {
    families: Option<Vec<String>>,
    big_n: Option<Vec<u64>>,
    bf: Option<Bf>,
    #[serde(default = "four")]
    prefix_length: usize,
    #[serde(default = "ks")]
    k_values: Vec<i64>,
    #[serde(default = "thousand")]
    triples: usize,
    #[serde(default = "eight")]
    triple_length: usize,
}

fn four() -> usize {
    4
}
fn eight() -> usize {
    8
}
fn thousand() -> usize {
    1000
}
fn ks() -> Vec<i64> {
    vec![0, 1, 2]
}

/// The family words and `Nᵢ`, plus a description of where they came from.
fn pi_config(config: &ExperimentConfig, p: &Params) -> Result<(PiConfig, Value), RunError> {
    let Some(GroupSpec::Free { rank }) = config.group else {
        return Err(RunError::invalid("$.group.kind", "expected free"));
    };
    let base: Vec<u32> = (0..rank).collect();
    match (&p.families, &p.big_n, &p.bf) {
        (Some(f), Some(n), None) => {
            let families = f
                .iter()
                .enumerate()
                .map(|(i, s)| free_word(rank, s, &format!("$.parameters.families[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            if families.len() < p.prefix_length || n.len() < p.prefix_length {
                return Err(RunError::invalid(
                    "$.parameters",
                    "families and big_n need at least prefix_length entries",
                ));
            }
            let source = json!({"kind": "given", "families": f, "big_n": n});
            Ok((
                PiConfig {
                    base,
                    families,
                    big_n: n.clone(),
                },
                source,
            ))
        }
        (None, None, Some(bf)) => {
            let f1 = free_word(rank, &bf.f1, "$.parameters.bf.f1")?;
            let f2 = free_word(rank, &bf.f2, "$.parameters.bf.f2")?;
            let count = bf.count.unwrap_or(p.prefix_length);
            if count < p.prefix_length {
                return Err(RunError::invalid(
                    "$.parameters.bf.count",
                    "must be at least prefix_length",
                ));
            }
            let family = make_bf_family(&f1, &f2, bf.c, count, bf.window)
                .map_err(|e| RunError::invalid("$.parameters.bf", e))?;
            let group = FreeGroup::new(rank);
            let ball = standard_ball(
                &group,
                &group.standard_generators(),
                bf.translates_radius,
                config.budgets.ball_cap,
            )?;
            let big_n = overlap_surrogates(&family, bf.r, ball.elements(), bf.margin)?;
            let families = family.family_words();
            let source = json!({
                "kind": "bf",
                "f1": f1.to_text(), "f2": f2.to_text(), "c": bf.c, "count": count, "window": bf.window,
                "overlap_radius": bf.r, "translates_radius": bf.translates_radius, "margin": bf.margin,
                "axis_k": family.k, "axis_l": family.l,
                "members": family.members.iter().map(|m| m.to_text()).collect::<Vec<_>>(),
                "big_n": big_n,
            });
            Ok((
                PiConfig {
                    base,
                    families,
                    big_n,
                },
                source,
            ))
        }
        _ => Err(RunError::invalid(
            "$.parameters",
            "give either families with big_n, or bf",
        )),
    }
}

fn prefix_text(p: &PiPrefix) -> String {
    p.values()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_prefix(s: &str) -> Result<PiPrefix, RunError> {
    let v: Result<Vec<u32>, _> = s.split_whitespace().map(str::parse).collect();
    let v = v.map_err(|_| RunError::Verification(vec![format!("bad prefix \"{s}\"")]))?;
    PiPrefix::new(v).map_err(|e| RunError::Verification(vec![e.to_string()]))
}

fn random_prefix(rng: &mut ChaCha8Rng, m: usize) -> PiPrefix {
    PiPrefix::new((1..=m as u32).map(|n| rng.gen_range(1..=n)).collect()).expect("in range")
}

pub fn run(config: &ExperimentConfig) -> Result<Outcome, RunError> {
    let p: Params = config.params()?;
    let (pi, source) = pi_config(config, &p)?;
    let prefixes = PiPrefix::all(p.prefix_length);
    let mut pairs = Vec::new();
    for r in &prefixes {
        for s in &prefixes {
            let k = qks_compare(r, s, 0)?.sup_diff;
            if p.k_values.contains(&k) {
                pairs.push((r, s));
            }
        }
    }
    let reports: Vec<OrderReport> = pairs
        .par_iter()
        .map(|(r, s)| order_preservation_check(r, s, &pi))
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(
        "pairs",
        &[
            "r",
            "s",
            "k",
            "bound",
            "max_length",
            "max_ratio",
            "checked",
            "passed",
        ],
    );
    let mut by_k = Vec::new();
    for &k in &p.k_values {
        let mut n = 0;
        let mut violations = 0;
        let mut worst: Option<(f64, usize)> = None;
        for (i, rep) in reports.iter().enumerate().filter(|(_, r)| r.k == k) {
            n += 1;
            violations += usize::from(!rep.passed);
            if worst.map_or(true, |(m, _)| rep.max_ratio > m) {
                worst = Some((rep.max_ratio, i));
            }
        }
        let w = worst.map(|(_, i)| {
            json!({"r": prefix_text(pairs[i].0), "s": prefix_text(pairs[i].1), "max_length": reports[i].max_length,
                   "bound": reports[i].bound, "generator": reports[i].worst})
        });
        by_k.push(json!({"k": k, "pairs": n, "violations": violations, "max_ratio": worst.map(|x| x.0), "worst": w}));
    }
    for ((r, s), rep) in pairs.iter().zip(&reports) {
        table.push(vec![
            prefix_text(r),
            prefix_text(s),
            rep.k.to_string(),
            rep.bound.to_string(),
            rep.max_length.to_string(),
            num(rep.max_ratio),
            rep.checked.to_string(),
            rep.passed.to_string(),
        ]);
    }
    let failures: Vec<Value> = pairs
        .iter()
        .zip(&reports)
        .filter(|(_, rep)| !rep.passed)
        .map(|((r, s), rep)| json!({"r": prefix_text(r), "s": prefix_text(s), "max_length": rep.max_length, "bound": rep.bound}))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut reflexive = 0;
    let mut triangle = 0;
    let mut first_bad = None;
    for _ in 0..p.triples {
        let r = random_prefix(&mut rng, p.triple_length);
        let s = random_prefix(&mut rng, p.triple_length);
        let t = random_prefix(&mut rng, p.triple_length);
        let d = |x: &PiPrefix, y: &PiPrefix| qks_compare(x, y, 0).map(|q| q.sup_diff);
        if d(&r, &r)? != 0 {
            reflexive += 1;
        }
        if d(&r, &t)? > d(&r, &s)? + d(&s, &t)? {
            triangle += 1;
            first_bad
                .get_or_insert_with(|| json!([prefix_text(&r), prefix_text(&s), prefix_text(&t)]));
        }
    }
    let results = json!({
        "source": source,
        "prefix_length": p.prefix_length,
        "k_values": p.k_values,
        "pairs_checked": reports.len(),
        "violations": failures.len(),
        "failures": failures,
        "by_k": by_k,
        "quasi_order": {"triples": p.triples, "length": p.triple_length, "seed": config.seed,
                        "reflexivity_violations": reflexive, "triangle_violations": triangle, "first_violation": first_bad},
    });
    Ok(Outcome {
        results,
        tables: vec![table],
    })
}

pub fn verify(config: &ExperimentConfig, results: &Value, c: &mut Checks) -> Result<(), RunError> {
    let p: Params = config.params()?;
    let (pi, _) = pi_config(config, &p)?;
    let recorded_n = array_at(results, "source.big_n").ok();
    if let Some(n) = recorded_n {
        let got: Vec<u64> = n.iter().filter_map(Value::as_u64).collect();
        c.check(got == pi.big_n, || {
            format!("big_n: recorded {got:?}, recomputed {:?}", pi.big_n)
        });
    }
    let mut claims = Vec::new();
    for entry in array_at(results, "by_k")? {
        if let Some(w) = entry.get("worst").filter(|w| !w.is_null()) {
            claims.push((
                w["r"].as_str().unwrap_or(""),
                w["s"].as_str().unwrap_or(""),
                f64_at(w, "max_length")?,
                false,
            ));
        }
    }
    for f in array_at(results, "failures")? {
        claims.push((
            f["r"].as_str().unwrap_or(""),
            f["s"].as_str().unwrap_or(""),
            f64_at(f, "max_length")?,
            true,
        ));
    }
    for (r, s, max_length, failed) in claims {
        let (r, s) = (parse_prefix(r)?, parse_prefix(s)?);
        let rep = order_preservation_check(&r, &s, &pi)?;
        c.close(
            &format!("max length for ({}; {})", prefix_text(&r), prefix_text(&s)),
            max_length,
            rep.max_length as f64,
        );
        c.check(rep.passed != failed, || {
            format!("pass flag for ({}; {})", prefix_text(&r), prefix_text(&s))
        });
    }
    Ok(())
}
