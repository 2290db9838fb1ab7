//! Anisotropy certificates from a quasi-morphism subordinate to a length.

use serde::Deserialize;
use serde_json::{json, Value};

use hypactions_core::group::{BaumslagSolitar, FreeGroup, FreeWord, Group};
use hypactions_core::metric::{free_word_length, Length};
use hypactions_core::quasimorphism::{
    anisotropy_certificate, brooks_qm, bs_t_length, commutator_scan, defect_empirical,
    subordination_fit, AnisotropyCertificate, BsExponentSum, FreeExponentSum, QuasiMorphism,
    SubordinationFit,
};

use super::delta::standard_generators;
use super::{array_at, f64_at, field, str_at, Checks};
use crate::bundle::{num, Outcome, Table};
use crate::config::{ExperimentConfig, GroupSpec};
use crate::error::RunError;
use crate::groups::{element, free_word, standard_ball};

#[derive(Debug, Deserialize)]
struct Params {
    g: String,
    radius: usize,
    qm: Option<Value>,
    #[serde(default = "sixty_four")]
    homogenization: u64,
    #[serde(default = "million")]
    m_cap: f64,
}

fn sixty_four() -> u64 {
    64
}

fn million() -> f64 {
    1e6
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum QmSpec {
    ExponentSum { letter: Option<String> },
    Brooks { w: String },
}

fn spec(p: &Params) -> Result<QmSpec, RunError> {
    match &p.qm {
        None => Ok(QmSpec::ExponentSum { letter: None }),
        Some(v) => {
            serde_json::from_value(v.clone()).map_err(|e| RunError::invalid("$.parameters.qm", e))
        }
    }
}

const EXPONENT_SUM: &str =
    "exponent sum of one generator, a homomorphism; its homogenization is itself";
const BROOKS: &str =
    "occurrences of w minus occurrences of w^-1 in the freely reduced word, overlaps allowed; \
                      the homogenization counts occurrences in the cyclic core, read cyclically";

fn free_qm(rank: u32, s: &QmSpec) -> Result<(Box<dyn QuasiMorphism<FreeWord>>, Value), RunError> {
    match s {
        QmSpec::ExponentSum { letter } => {
            let l = letter.as_deref().unwrap_or("a");
            let w = free_word(rank, l, "$.parameters.qm.letter")?;
            if w.len() != 1 || w.letters()[0].inverse {
                return Err(RunError::invalid(
                    "$.parameters.qm.letter",
                    format!("expected a generator, found \"{l}\""),
                ));
            }
            let index = w.letters()[0].index;
            Ok((
                Box::new(FreeExponentSum { index }),
                json!({"kind": "exponent_sum", "letter": l, "convention": EXPONENT_SUM}),
            ))
        }
        QmSpec::Brooks { w } => {
            let word = free_word(rank, w, "$.parameters.qm.w")?;
            if word.is_empty() {
                return Err(RunError::invalid(
                    "$.parameters.qm.w",
                    "Brooks word must be nonempty",
                ));
            }
            let q = brooks_qm(&word);
            let meta = json!({"kind": "brooks", "w": word.to_text(), "convention": BROOKS, "warning": q.warning});
            Ok((Box::new(q), meta))
        }
    }
}

fn bs_qm(
    s: &QmSpec,
) -> Result<(Box<dyn QuasiMorphism<hypactions_core::BsElement>>, Value), RunError> {
    match s {
        QmSpec::ExponentSum { letter: None } => Ok((
            Box::new(BsExponentSum),
            json!({"kind": "exponent_sum", "letter": "t", "convention": EXPONENT_SUM}),
        )),
        QmSpec::ExponentSum { letter: Some(l) } if l == "t" => Ok((
            Box::new(BsExponentSum),
            json!({"kind": "exponent_sum", "letter": "t", "convention": EXPONENT_SUM}),
        )),
        QmSpec::ExponentSum { .. } => Err(RunError::invalid(
            "$.parameters.qm.letter",
            "on BS(m,n) only the t-exponent sum is built",
        )),
        QmSpec::Brooks { .. } => Err(RunError::invalid(
            "$.parameters.qm.kind",
            "Brooks quasi-morphisms need a free group",
        )),
    }
}

pub fn run(config: &ExperimentConfig) -> Result<Outcome, RunError> {
    let p: Params = config.params()?;
    let s = spec(&p)?;
    match config.group {
        Some(GroupSpec::Free { rank }) => {
            let (q, meta) = free_qm(rank, &s)?;
            certify(
                config,
                &p,
                &FreeGroup::new(rank),
                q.as_ref(),
                &free_word_length,
                meta,
                "word",
            )
        }
        Some(GroupSpec::Bs { m, n }) => {
            let (q, meta) = bs_qm(&s)?;
            certify(
                config,
                &p,
                &BaumslagSolitar::new(m, n),
                q.as_ref(),
                &bs_t_length,
                meta,
                "t_syllables",
            )
        }
        _ => Err(RunError::invalid(
            "$.group.kind",
            "qm-certify needs free or bs",
        )),
    }
}

#[allow(clippy::too_many_arguments)]
fn certify<G, Q, L>(
    config: &ExperimentConfig,
    p: &Params,
    group: &G,
    q: &Q,
    len: &L,
    meta: Value,
    length_name: &str,
) -> Result<Outcome, RunError>
where
    G: Group,
    Q: QuasiMorphism<G::Element> + ?Sized,
    L: Length<G::Element> + ?Sized,
{
    let g = element(group, &p.g, "$.parameters.g")?;
    let ball = standard_ball(
        group,
        &standard_generators(group, config)?,
        p.radius,
        config.budgets.ball_cap,
    )?;
    let defect = defect_empirical(group, q, ball.elements());
    let fit: SubordinationFit<G::Element> = subordination_fit(group, q, len, ball.elements())?;
    let cert = anisotropy_certificate(
        group,
        q,
        len,
        &g,
        ball.elements(),
        p.radius,
        p.homogenization,
        p.m_cap,
    )?;
    let (comm, comm_w) = commutator_scan(group, q, ball.elements());
    let mut table = Table::new(
        "inequalities",
        &["element", "q", "length", "bound", "holds"],
    );
    for i in &cert.inequalities {
        let holds = SubordinationFit::<()>::holds(cert.m, i.q, i.length);
        table.push(vec![
            i.element.clone(),
            num(i.q),
            num(i.length),
            num(cert.m * i.length + cert.m),
            holds.to_string(),
        ]);
    }
    let render_pair = |w: Option<(G::Element, G::Element)>| {
        w.map(|(a, b)| json!([group.render(&a), group.render(&b)]))
    };
    let results = json!({
        "qm": meta,
        "length": length_name,
        "ball": ball.len(),
        "homogenization": p.homogenization,
        "certificate": serde_json::to_value(&cert).expect("serializable"),
        "defect": {"empirical": defect.defect, "witness": render_pair(defect.witness), "pairs": defect.pairs,
                   "analytic_bound": q.defect_bound()},
        "subordination": {"m": fit.m, "affine": fit.affine, "slope": fit.slope,
                          "witness": fit.witness.map(|w| group.render(&w)), "checked": fit.checked},
        "commutators": {"max": comm, "witness": render_pair(comm_w)},
    });
    Ok(Outcome {
        results,
        tables: vec![table],
    })
}

pub fn verify(config: &ExperimentConfig, results: &Value, c: &mut Checks) -> Result<(), RunError> {
    let p: Params = config.params()?;
    let s = spec(&p)?;
    match config.group {
        Some(GroupSpec::Free { rank }) => {
            let (q, _) = free_qm(rank, &s)?;
            recheck(
                &FreeGroup::new(rank),
                q.as_ref(),
                &free_word_length,
                results,
                c,
            )
        }
        Some(GroupSpec::Bs { m, n }) => {
            let (q, _) = bs_qm(&s)?;
            recheck(
                &BaumslagSolitar::new(m, n),
                q.as_ref(),
                &bs_t_length,
                results,
                c,
            )
        }
        _ => Err(RunError::invalid(
            "$.group.kind",
            "qm-certify needs free or bs",
        )),
    }
}

fn recheck<G, Q, L>(
    group: &G,
    q: &Q,
    len: &L,
    results: &Value,
    c: &mut Checks,
) -> Result<(), RunError>
where
    G: Group,
    Q: QuasiMorphism<G::Element> + ?Sized,
    L: Length<G::Element> + ?Sized,
{
    let cert: AnisotropyCertificate =
        serde_json::from_value(field(results, "certificate")?.clone())
            .map_err(|e| RunError::Verification(vec![format!("results.certificate: {e}")]))?;
    for (i, ineq) in cert.inequalities.iter().enumerate() {
        let e = element(
            group,
            &ineq.element,
            &format!("results.certificate.inequalities[{i}]"),
        )?;
        let l = len.length(&e).ok_or_else(|| {
            RunError::Verification(vec![format!("no length for {}", ineq.element)])
        })?;
        c.close(&format!("q({})", ineq.element), ineq.q, q.eval(&e));
        c.close(&format!("length({})", ineq.element), ineq.length, l);
        c.check(SubordinationFit::<()>::holds(cert.m, q.eval(&e), l), || {
            format!("|q({})| <= M*l + M fails with M = {}", ineq.element, cert.m)
        });
    }
    let g = element(group, &cert.witness, "results.certificate.witness")?;
    let value = match q.homogenized(&g) {
        Some(v) => v,
        None => {
            let n = f64_at(results, "homogenization")? as i64;
            q.eval(&group.pow(&g, n)) / n as f64
        }
    };
    c.close("homogenized value", cert.value, value);
    c.check(cert.check_recorded(), || {
        "recorded certificate does not satisfy its own inequalities".into()
    });
    c.check(value.abs() > cert.value_error, || {
        format!(
            "homogenized value {value} within error {}",
            cert.value_error
        )
    });
    if let Ok(w) = array_at(results, "defect.witness") {
        let a = element(
            group,
            str_at(results, "defect.witness.0")?,
            "results.defect.witness[0]",
        )?;
        let b = element(
            group,
            str_at(results, "defect.witness.1")?,
            "results.defect.witness[1]",
        )?;
        debug_assert_eq!(w.len(), 2);
        let d = (q.eval(&group.multiply(&a, &b)) - q.eval(&a) - q.eval(&b)).abs();
        c.close("defect witness", f64_at(results, "defect.empirical")?, d);
    } else {
        // no witness: every pair had zero defect
        c.close(
            "defect without witness",
            f64_at(results, "defect.empirical")?,
            0.0,
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(v: Value) -> ExperimentConfig {
        ExperimentConfig::from_value(&v).unwrap()
    }

    #[test]
    fn bs_certificate_round_trips() {
        let c = cfg(
            json!({"group": {"kind": "bs", "m": 2, "n": 3}, "experiment": "qm-certify", "parameters": {"g": "t", "radius": 3}}),
        );
        let out = run(&c).unwrap();
        assert_eq!(out.results["certificate"]["m"], json!(1.0));
        assert_eq!(out.results["certificate"]["value"], json!(1.0));
        assert_eq!(out.results["defect"]["empirical"], json!(0.0));
        let mut checks = Checks::default();
        verify(&c, &out.results, &mut checks).unwrap();
        assert!(checks.failures.is_empty(), "{:?}", checks.failures);
        let mut bad = out.results.clone();
        bad["certificate"]["inequalities"][3]["q"] = json!(7.0);
        let mut checks = Checks::default();
        verify(&c, &bad, &mut checks).unwrap();
        assert!(!checks.failures.is_empty());
    }

    #[test]
    fn brooks_on_free_group() {
        let c = cfg(
            json!({"group": {"kind": "free", "rank": 2}, "experiment": "qm-certify",
                           "parameters": {"g": "ab", "radius": 3, "qm": {"kind": "brooks", "w": "ab"}}}),
        );
        let out = run(&c).unwrap();
        assert_eq!(out.results["certificate"]["value"], json!(1.0));
        assert_eq!(out.results["qm"]["kind"], json!("brooks"));
        let mut checks = Checks::default();
        verify(&c, &out.results, &mut checks).unwrap();
        assert!(checks.failures.is_empty(), "{:?}", checks.failures);
    }

    #[test]
    fn bad_qm_specs_are_rejected() {
        let c = cfg(
            json!({"group": {"kind": "bs", "m": 2, "n": 3}, "experiment": "qm-certify",
                           "parameters": {"g": "t", "radius": 2, "qm": {"kind": "brooks", "w": "ab"}}}),
        );
        assert!(matches!(run(&c), Err(RunError::Validation(_))));
        let c = cfg(
            json!({"group": {"kind": "free", "rank": 2}, "experiment": "qm-certify",
                           "parameters": {"g": "ab", "radius": 2, "qm": {"kind": "nope"}}}),
        );
        assert!(matches!(run(&c), Err(RunError::Validation(_))));
    }

    #[test]
    fn commutator_of_abelian_part_vanishes() {
        let c = cfg(
            json!({"group": {"kind": "free", "rank": 2}, "experiment": "qm-certify",
                           "parameters": {"g": "a", "radius": 2}}),
        );
        assert_eq!(run(&c).unwrap().results["commutators"]["max"], json!(0.0));
    }
}
