//! Experiment configs: a small declarative schema, validation that reports
//! every offending path, and the typed view used by the runner.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use hypactions_core::group::DEFAULT_BALL_CAP;
use hypactions_core::metric::DEFAULT_QUADRUPLE_CAP;

use crate::error::RunError;

/// Version of every file this crate reads or writes.
pub const FORMAT: u64 = 1;

#[derive(Clone, Copy, Debug)]
pub enum Kind {
    UInt,
    Int,
    Number,
    Str,
    Bool,
    OneOf(&'static [&'static str]),
    ListOf(&'static Kind),
    Object,
    Any,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::UInt => "a non-negative integer".into(),
            Kind::Int => "an integer".into(),
            Kind::Number => "a number".into(),
            Kind::Str => "a string".into(),
            Kind::Bool => "a boolean".into(),
            Kind::OneOf(v) => format!("one of {}", v.join(", ")),
            Kind::ListOf(k) => format!("a list of {}", k.describe()),
            Kind::Object => "an object".into(),
            Kind::Any => "any value".into(),
        }
    }

    fn check(&self, v: &Value, path: &str, errors: &mut Vec<String>) {
        let ok = match self {
            Kind::UInt => v.as_u64().is_some(),
            Kind::Int => v.as_i64().is_some(),
            Kind::Number => v.as_f64().is_some(),
            Kind::Str => v.is_string(),
            Kind::Bool => v.is_boolean(),
            Kind::OneOf(opts) => v.as_str().is_some_and(|s| opts.contains(&s)),
            Kind::ListOf(inner) => match v.as_array() {
                Some(items) => {
                    for (i, item) in items.iter().enumerate() {
                        inner.check(item, &format!("{path}[{i}]"), errors);
                    }
                    true
                }
                None => false,
            },
            Kind::Object => v.is_object(),
            Kind::Any => true,
        };
        if !ok {
            errors.push(format!("{path}: expected {}, found {v}", self.describe()));
        }
    }

    pub fn json_schema(&self) -> Value {
        match self {
            Kind::UInt => json!({"type": "integer", "minimum": 0}),
            Kind::Int => json!({"type": "integer"}),
            Kind::Number => json!({"type": "number"}),
            Kind::Str => json!({"type": "string"}),
            Kind::Bool => json!({"type": "boolean"}),
            Kind::OneOf(v) => json!({"enum": v}),
            Kind::ListOf(k) => json!({"type": "array", "items": k.json_schema()}),
            Kind::Object => json!({"type": "object"}),
            Kind::Any => json!({}),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Field {
    pub name: &'static str,
    pub kind: Kind,
    pub required: bool,
    pub doc: &'static str,
}

const fn req(name: &'static str, kind: Kind, doc: &'static str) -> Field {
    Field {
        name,
        kind,
        required: true,
        doc,
    }
}

const fn opt(name: &'static str, kind: Kind, doc: &'static str) -> Field {
    Field {
        name,
        kind,
        required: false,
        doc,
    }
}

fn check_object(v: &Value, fields: &[Field], path: &str, errors: &mut Vec<String>) {
    let Some(map) = v.as_object() else {
        errors.push(format!("{path}: expected an object, found {v}"));
        return;
    };
    for f in fields {
        match map.get(f.name) {
            Some(x) => f.kind.check(x, &format!("{path}.{}", f.name), errors),
            None if f.required => errors.push(format!("{path}.{}: required field missing", f.name)),
            None => {}
        }
    }
    for k in map.keys() {
        if !fields.iter().any(|f| f.name == k) {
            errors.push(format!("{path}.{k}: unknown field"));
        }
    }
}

fn object_schema(fields: &[Field]) -> Value {
    let props: Map<String, Value> = fields
        .iter()
        .map(|f| {
            let mut s = f.kind.json_schema();
            s["description"] = json!(f.doc);
            (f.name.to_string(), s)
        })
        .collect();
    let required: Vec<&str> = fields
        .iter()
        .filter(|f| f.required)
        .map(|f| f.name)
        .collect();
    json!({"type": "object", "properties": props, "required": required, "additionalProperties": false})
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Delta,
    Tau,
    Compress,
    BorelOrder,
    QmCertify,
    Sl2Embed,
    Tightspan,
    ConeOff,
    IsotropyProbe,
}

const UINTS: Kind = Kind::UInt;
const INTS: Kind = Kind::Int;
const STRS: Kind = Kind::Str;
const ANY: Kind = Kind::Any;
const ROW: Kind = Kind::ListOf(&ANY);

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::Delta,
        Experiment::Tau,
        Experiment::Compress,
        Experiment::BorelOrder,
        Experiment::QmCertify,
        Experiment::Sl2Embed,
        Experiment::Tightspan,
        Experiment::ConeOff,
        Experiment::IsotropyProbe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Delta => "delta",
            Experiment::Tau => "tau",
            Experiment::Compress => "compress",
            Experiment::BorelOrder => "borel-order",
            Experiment::QmCertify => "qm-certify",
            Experiment::Sl2Embed => "sl2-embed",
            Experiment::Tightspan => "tightspan",
            Experiment::ConeOff => "cone-off",
            Experiment::IsotropyProbe => "isotropy-probe",
        }
    }

    pub fn from_name(s: &str) -> Option<Experiment> {
        Experiment::ALL.into_iter().find(|e| e.name() == s)
    }

    /// Group kinds the experiment accepts; empty when no group is needed.
    pub fn groups(self) -> &'static [&'static str] {
        match self {
            Experiment::Delta
            | Experiment::Tau
            | Experiment::QmCertify
            | Experiment::ConeOff
            | Experiment::IsotropyProbe => &["free", "bs"],
            Experiment::Compress | Experiment::BorelOrder => &["free"],
            Experiment::Sl2Embed => &["sl2"],
            Experiment::Tightspan => &[],
        }
    }

    pub fn fields(self) -> &'static [Field] {
        match self {
            Experiment::Delta => {
                const F: &[Field] = &[
                    req(
                        "radius",
                        Kind::UInt,
                        "ball radius in the standard generators",
                    ),
                    opt(
                        "mode",
                        Kind::OneOf(&["exhaustive", "sampled"]),
                        "default exhaustive",
                    ),
                    opt(
                        "samples",
                        Kind::UInt,
                        "quadruples drawn in sampled mode; default 1000000",
                    ),
                ];
                F
            }
            Experiment::Tau => {
                const F: &[Field] = &[
                    req("g", Kind::Str, "element"),
                    opt("horizon", Kind::UInt, "largest power n; default 8"),
                ];
                F
            }
            Experiment::Compress => {
                const F: &[Field] = &[
                req("genset", Kind::Object, "{\"base\": [letters], \"families\": [{\"w\": word, \"cap\": n or \"inf\"}]}"),
                opt("k_max", Kind::UInt, "powers w_j^k for k = 1..=k_max; default 12"),
                opt("alpha", Kind::Number, "constant of the lower bound alpha*k/n_j - 2"),
                opt("words", Kind::ListOf(&STRS), "extra words to measure"),
            ];
                F
            }
            Experiment::BorelOrder => {
                const F: &[Field] = &[
                    opt(
                        "families",
                        Kind::ListOf(&STRS),
                        "family words; with big_n, instead of bf",
                    ),
                    opt("big_n", Kind::ListOf(&UINTS), "overlap constants N_i"),
                    opt(
                        "bf",
                        Kind::Object,
                        "{f1, f2, c, count, window, margin, r, translates_radius}",
                    ),
                    opt(
                        "prefix_length",
                        Kind::UInt,
                        "length m of the prefixes r, s; default 4",
                    ),
                    opt(
                        "k_values",
                        Kind::ListOf(&INTS),
                        "sup-differences to test; default [0, 1, 2]",
                    ),
                    opt(
                        "triples",
                        Kind::UInt,
                        "random prefix triples for the quasi-order check; default 1000",
                    ),
                    opt(
                        "triple_length",
                        Kind::UInt,
                        "length of those prefixes; default 8",
                    ),
                ];
                F
            }
            Experiment::QmCertify => {
                const F: &[Field] = &[
                req("g", Kind::Str, "witness element"),
                req("radius", Kind::UInt, "ball radius for the defect and the fit"),
                opt("qm", Kind::Object, "{\"kind\": \"exponent_sum\"} (default on BS) or {\"kind\": \"brooks\", \"w\": word}"),
                opt("homogenization", Kind::UInt, "power n when no exact homogenization exists; default 64"),
                opt("m_cap", Kind::Number, "largest acceptable subordination constant; default 1e6"),
            ];
                F
            }
            Experiment::Sl2Embed => {
                const F: &[Field] = &[
                    opt(
                        "x",
                        Kind::Str,
                        "parameter of [[x, x^2-1], [1, x]]; default sqrtd-1",
                    ),
                    opt("radius", Kind::UInt, "word ball radius; default 1"),
                    opt(
                        "generators",
                        Kind::ListOf(&ANY),
                        "extra generators: \"[[a, b], [c, d]]\" or 2x2 arrays of {a, b}",
                    ),
                    opt("e1", Kind::OneOf(&["+", "-"]), "first embedding; default +"),
                    opt(
                        "e2",
                        Kind::OneOf(&["+", "-"]),
                        "second embedding; default -",
                    ),
                ];
                F
            }
            Experiment::Tightspan => {
                const F: &[Field] = &[
                    opt(
                        "metric",
                        Kind::ListOf(&ROW),
                        "distance matrix; numbers or \"p/q\" strings",
                    ),
                    opt(
                        "metric_csv",
                        Kind::Str,
                        "distance matrix file, relative to the config",
                    ),
                    opt(
                        "starts",
                        Kind::UInt,
                        "random admissible starts to project; default 100",
                    ),
                    opt("tol", Kind::Number, "extremality slack; default 1e-9"),
                    opt(
                        "max_iter",
                        Kind::UInt,
                        "projection iterations; default 10000",
                    ),
                    opt(
                        "exact",
                        Kind::Bool,
                        "rational arithmetic for the Kuratowski and lowering checks",
                    ),
                ];
                F
            }
            Experiment::ConeOff => {
                const F: &[Field] = &[
                    req("g", Kind::Str, "generator of the orbit subgroup"),
                    req("radius", Kind::UInt, "ball radius"),
                    opt("a", Kind::Number, "cone-off threshold A; default 1"),
                    opt(
                        "orbit_range",
                        Kind::UInt,
                        "orbit powers -k..=k; default radius",
                    ),
                ];
                F
            }
            Experiment::IsotropyProbe => {
                const F: &[Field] = &[
                    req("radius", Kind::UInt, "ball radius"),
                    opt("d", Kind::Number, "matching constant D; default 1"),
                    opt("samples", Kind::UInt, "pairs of pairs; default 100"),
                ];
                F
            }
        }
    }
}

const TOP: &[Field] = &[
    opt("format", Kind::UInt, "file format version, 1"),
    opt(
        "group",
        Kind::Object,
        "group spec; required except for tightspan",
    ),
    req(
        "experiment",
        Kind::OneOf(&EXPERIMENT_NAMES),
        "experiment name",
    ),
    opt("parameters", Kind::Object, "experiment parameters"),
    opt("budgets", Kind::Object, "resource caps"),
    opt("seed", Kind::UInt, "RNG seed; default 0"),
];

const EXPERIMENT_NAMES: [&str; 9] = [
    "delta",
    "tau",
    "compress",
    "borel-order",
    "qm-certify",
    "sl2-embed",
    "tightspan",
    "cone-off",
    "isotropy-probe",
];

const BUDGETS: &[Field] = &[
    opt("ball_cap", Kind::UInt, "largest ball enumerated"),
    opt(
        "quadruple_cap",
        Kind::UInt,
        "largest exhaustive four-point scan",
    ),
    opt(
        "length_budget",
        Kind::UInt,
        "table cells for compressed lengths",
    ),
    opt(
        "time_cap_s",
        Kind::Number,
        "wall-clock cap in seconds, checked after the run",
    ),
];

const FREE: &[Field] = &[
    req("kind", Kind::Str, "free"),
    req("rank", Kind::UInt, "1..=26"),
];
const BS: &[Field] = &[
    req("kind", Kind::Str, "bs"),
    req("m", Kind::Int, "nonzero"),
    req("n", Kind::Int, "nonzero"),
];
const SL2: &[Field] = &[
    req("kind", Kind::Str, "sl2"),
    req("field", Kind::Object, "{\"d\": square-free d > 1}"),
];
const FIELD: &[Field] = &[req("d", Kind::Int, "square-free integer > 1")];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Free { rank: u32 },
    Bs { m: i64, n: i64 },
    Sl2 { field: FieldSpec },
}

impl GroupSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            GroupSpec::Free { .. } => "free",
            GroupSpec::Bs { .. } => "bs",
            GroupSpec::Sl2 { .. } => "sl2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub d: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    pub ball_cap: usize,
    pub quadruple_cap: u64,
    pub length_budget: u64,
    pub time_cap_s: Option<f64>,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            ball_cap: DEFAULT_BALL_CAP,
            quadruple_cap: DEFAULT_QUADRUPLE_CAP,
            length_budget: hypactions_core::compression::DEFAULT_LENGTH_BUDGET,
            time_cap_s: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub group: Option<GroupSpec>,
    pub experiment: Experiment,
    pub parameters: Map<String, Value>,
    pub budgets: Budgets,
    pub seed: u64,
    /// The config as given, echoed into every summary.
    pub raw: Value,
}

fn validate_group(v: &Value, errors: &mut Vec<String>) {
    let path = "$.group";
    match v.get("kind").and_then(Value::as_str) {
        Some("free") => {
            check_object(v, FREE, path, errors);
            if let Some(r) = v.get("rank").and_then(Value::as_u64) {
                if !(1..=26).contains(&r) {
                    errors.push(format!("{path}.rank: must lie in 1..=26, found {r}"));
                }
            }
        }
        Some("bs") => {
            check_object(v, BS, path, errors);
            for k in ["m", "n"] {
                if let Some(x) = v.get(k).and_then(Value::as_i64) {
                    if x == 0 || x.unsigned_abs() > 1_000_000 {
                        errors.push(format!(
                            "{path}.{k}: must be nonzero with |{k}| <= 1000000, found {x}"
                        ));
                    }
                }
            }
        }
        Some("sl2") => {
            check_object(v, SL2, path, errors);
            if let Some(f) = v.get("field") {
                check_object(f, FIELD, &format!("{path}.field"), errors);
                if let Some(d) = f.get("d").and_then(Value::as_i64) {
                    if !hypactions_core::sl2::is_square_free(d) {
                        errors.push(format!(
                            "{path}.field.d: {d} is not a square-free integer > 1"
                        ));
                    }
                }
            }
        }
        Some(other) => errors.push(format!(
            "{path}.kind: expected one of free, bs, sl2, found \"{other}\""
        )),
        None => errors.push(format!("{path}.kind: required field missing")),
    }
}

/// Every violation of the schema, one `path: message` line each.
pub fn validate(v: &Value) -> Vec<String> {
    let mut errors = Vec::new();
    check_object(v, TOP, "$", &mut errors);
    if let Some(f) = v.get("format").and_then(Value::as_u64) {
        if f != FORMAT {
            errors.push(format!(
                "$.format: unsupported version {f}, expected {FORMAT}"
            ));
        }
    }
    if let Some(b) = v.get("budgets") {
        check_object(b, BUDGETS, "$.budgets", &mut errors);
    }
    let exp = v
        .get("experiment")
        .and_then(Value::as_str)
        .and_then(Experiment::from_name);
    match (v.get("group"), exp) {
        (Some(g), Some(e)) => {
            validate_group(g, &mut errors);
            if let Some(kind) = g.get("kind").and_then(Value::as_str) {
                if !e.groups().is_empty() && !e.groups().contains(&kind) {
                    errors.push(format!(
                        "$.group.kind: {} needs one of {}, found \"{kind}\"",
                        e.name(),
                        e.groups().join(", ")
                    ));
                }
            }
        }
        (None, Some(e)) if !e.groups().is_empty() => {
            errors.push("$.group: required field missing".into())
        }
        (Some(g), None) => validate_group(g, &mut errors),
        _ => {}
    }
    if let Some(e) = exp {
        let params = v.get("parameters").cloned().unwrap_or_else(|| json!({}));
        check_object(&params, e.fields(), "$.parameters", &mut errors);
    }
    errors
}

impl ExperimentConfig {
    pub fn from_value(v: &Value) -> Result<Self, RunError> {
        let errors = validate(v);
        if !errors.is_empty() {
            return Err(RunError::Validation(errors));
        }
        let bad = |e: serde_json::Error| RunError::Validation(vec![format!("$: {e}")]);
        let group = match v.get("group") {
            Some(g) => Some(serde_json::from_value(g.clone()).map_err(bad)?),
            None => None,
        };
        let experiment =
            Experiment::from_name(v["experiment"].as_str().unwrap_or_default()).expect("validated");
        let budgets = match v.get("budgets") {
            Some(b) => serde_json::from_value(b.clone()).map_err(bad)?,
            None => Budgets::default(),
        };
        Ok(ExperimentConfig {
            group,
            experiment,
            parameters: v
                .get("parameters")
                .and_then(Value::as_object)
                .cloned()
                .unwrap_or_default(),
            budgets,
            seed: v.get("seed").and_then(Value::as_u64).unwrap_or(0),
            raw: v.clone(),
        })
    }

    pub fn from_str(text: &str) -> Result<Self, RunError> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| RunError::invalid("$", format!("not JSON: {e}")))?;
        ExperimentConfig::from_value(&v)
    }

    /// Typed parameters; the schema has already been checked.
    pub fn params<T: for<'de> Deserialize<'de>>(&self) -> Result<T, RunError> {
        serde_json::from_value(Value::Object(self.parameters.clone()))
            .map_err(|e| RunError::invalid("$.parameters", e))
    }
}

/// JSON Schema of the config format.
pub fn schema() -> Value {
    let variants: Vec<Value> = Experiment::ALL
        .iter()
        .map(|e| {
            json!({
                "if": {"properties": {"experiment": {"const": e.name()}}},
                "then": {
                    "properties": {
                        "parameters": object_schema(e.fields()),
                        "group": {"properties": {"kind": {"enum": e.groups()}}}
                    }
                }
            })
        })
        .collect();
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "hypactions experiment config",
        "format": FORMAT,
        "type": "object",
        "properties": {
            "format": {"const": FORMAT},
            "group": {"oneOf": [object_schema(FREE), object_schema(BS), {
                "type": "object",
                "properties": {"kind": {"const": "sl2"}, "field": object_schema(FIELD)},
                "required": ["kind", "field"],
                "additionalProperties": false
            }]},
            "experiment": {"enum": EXPERIMENT_NAMES},
            "parameters": {"type": "object"},
            "budgets": object_schema(BUDGETS),
            "seed": {"type": "integer", "minimum": 0}
        },
        "required": ["experiment"],
        "additionalProperties": false,
        "allOf": variants
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_configs_validate() {
        let c = ExperimentConfig::from_value(&json!({
            "group": {"kind": "free", "rank": 2},
            "experiment": "delta",
            "parameters": {"radius": 3, "mode": "exhaustive"}
        }))
        .unwrap();
        assert_eq!(c.experiment, Experiment::Delta);
        assert_eq!(c.group, Some(GroupSpec::Free { rank: 2 }));
        assert_eq!(c.seed, 0);
        let c = ExperimentConfig::from_value(
            &json!({"experiment": "tightspan", "parameters": {"metric": [[0, 1], [1, 0]]}}),
        );
        assert!(c.is_ok());
    }

    #[test]
    fn every_offending_path_is_listed() {
        let errs = validate(&json!({
            "format": 2,
            "group": {"kind": "free", "rank": 0, "extra": 1},
            "experiment": "delta",
            "parameters": {"mode": "fast", "radius": "3", "colour": 1},
            "budgets": {"ball_cap": -1},
            "bogus": true
        }));
        for needle in [
            "$.format",
            "$.group.rank",
            "$.group.extra",
            "$.parameters.mode",
            "$.parameters.radius",
            "$.parameters.colour",
            "$.budgets.ball_cap",
            "$.bogus",
        ] {
            assert!(
                errs.iter().any(|e| e.starts_with(needle)),
                "{needle} missing from {errs:?}"
            );
        }
        let errs = validate(
            &json!({"group": {"kind": "sl2", "field": {"d": 4}}, "experiment": "delta", "parameters": {"radius": 1}}),
        );
        assert!(errs.iter().any(|e| e.starts_with("$.group.field.d")));
        assert!(errs.iter().any(|e| e.starts_with("$.group.kind")));
        assert!(
            validate(&json!({"experiment": "delta", "parameters": {"radius": 1}}))
                .iter()
                .any(|e| e == "$.group: required field missing")
        );
        assert!(validate(&json!({"experiment": "nope"}))
            .iter()
            .any(|e| e.starts_with("$.experiment")));
    }

    #[test]
    fn schema_names_every_experiment() {
        let s = schema();
        assert_eq!(s["allOf"].as_array().unwrap().len(), 9);
        assert_eq!(s["format"], json!(1));
    }
}
