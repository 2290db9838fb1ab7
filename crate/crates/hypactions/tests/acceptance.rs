//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Each criterion runs real experiment configs through the library (or the
//! binary), re-verifies the summary, and compares against oracles written
//! here from scratch. Every summary is kept for the determinism rerun.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use hypactions::bundle::render_summary;
use hypactions::{run, verify_summary, ExperimentConfig};
use hypactions_core::compression::{qks_compare, PiPrefix};

type Q = Ratio<i64>;

/// Reference value of `2·arccosh(1 + √2)`, computed to 40 digits offline.
const TAU_MINUS: f64 = 3.057_141_838_961_996_322_544_912_369_587_346_786_577;

struct Suite {
    runs: Vec<(Value, String)>,
    failed: Vec<usize>,
}

impl Suite {
    /// Runs a config, re-verifies it and records the rendered summary.
    fn run(&mut self, raw: Value) -> Result<Value, String> {
        let config = ExperimentConfig::from_value(&raw).map_err(|e| e.to_string())?;
        let out = run(&config, Path::new(".")).map_err(|e| e.to_string())?;
        let checks = verify_summary(&out.summary).map_err(|e| e.to_string())?;
        if !checks.failures.is_empty() {
            return Err(format!("verify: {:?}", checks.failures));
        }
        self.runs.push((raw, render_summary(&out.summary)));
        Ok(out.summary["results"].clone())
    }

    fn report(&mut self, n: usize, what: &str, outcome: Result<String, String>) {
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS  {what}: {detail}"),
            Err(why) => {
                println!("criterion {n}: FAIL  {what}: {why}");
                self.failed.push(n);
            }
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn u(v: &Value) -> u64 {
    v.as_u64().unwrap_or(u64::MAX)
}
fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

// Free words as signed letters: a = 1, b = 2, inverses negative.

fn reduce(w: &[i8]) -> Vec<i8> {
    let mut out: Vec<i8> = Vec::new();
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn mul(x: &[i8], y: &[i8]) -> Vec<i8> {
    reduce(&[x, y].concat())
}

fn inv(w: &[i8]) -> Vec<i8> {
    w.iter().rev().map(|x| -x).collect()
}

fn power(w: &[i8], n: usize) -> Vec<i8> {
    reduce(&w.repeat(n))
}

fn cyclic_length(w: &[i8]) -> usize {
    let mut w = reduce(w);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w = w[1..w.len() - 1].to_vec();
    }
    w.len()
}

fn text(w: &[i8]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&x| {
            let c = (b'a' + x.unsigned_abs() - 1) as char;
            if x < 0 {
                c.to_ascii_uppercase()
            } else {
                c
            }
        })
        .collect()
}

/// Letters, uppercase inverses and `^k` exponents.
fn parse(s: &str) -> Vec<i8> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        i += 1;
        if c == b'1' {
            continue;
        }
        let g =
            (c.to_ascii_lowercase() - b'a' + 1) as i8 * if c.is_ascii_uppercase() { -1 } else { 1 };
        let mut k: i64 = 1;
        if b.get(i) == Some(&b'^') {
            let start = i + 1;
            i = start;
            while i < b.len() && (b[i] == b'-' || b[i].is_ascii_digit()) {
                i += 1;
            }
            k = s[start..i].parse().unwrap();
        }
        let x = if k < 0 { -g } else { g };
        out.extend(std::iter::repeat(x).take(k.unsigned_abs() as usize));
    }
    reduce(&out)
}

fn random_reduced(rng: &mut ChaCha8Rng, len: usize) -> Vec<i8> {
    let mut w: Vec<i8> = Vec::new();
    while w.len() < len {
        let x = [1, -1, 2, -2][rng.gen_range(0..4)];
        if w.last() != Some(&-x) {
            w.push(x);
        }
    }
    w
}

fn criterion_1(s: &mut Suite) -> Result<String, String> {
    let start = Instant::now();
    let r = s.run(
        json!({"group": {"kind": "free", "rank": 2}, "experiment": "delta",
                         "parameters": {"radius": 3}, "budgets": {"quadruple_cap": 10_000_000}}),
    )?;
    let secs = start.elapsed().as_secs_f64();
    ensure(u(&r["points"]) == 53, || {
        format!("ball has {} points", r["points"])
    })?;
    ensure(u(&r["quadruples_checked"]) == 53u64.pow(4), || {
        format!("{} quadruples", r["quadruples_checked"])
    })?;
    ensure(f(&r["delta"]) == 0.0, || {
        format!("exhaustive delta {}", r["delta"])
    })?;
    ensure(secs < 60.0, || format!("exhaustive scan took {secs:.1}s"))?;
    let r6 = s.run(
        json!({"group": {"kind": "free", "rank": 2}, "experiment": "delta", "seed": 11,
                          "parameters": {"radius": 6, "mode": "sampled", "samples": 1_000_000}}),
    )?;
    ensure(u(&r6["quadruples_checked"]) == 1_000_000, || {
        format!("{} samples", r6["quadruples_checked"])
    })?;
    ensure(f(&r6["delta"]) == 0.0, || {
        format!("sampled delta {}", r6["delta"])
    })?;
    Ok(format!("delta 0 over 53^4 quadruples in {secs:.2}s; sampled delta 0 over 10^6 at radius 6 ({} points)", r6["points"]))
}

fn criterion_2(s: &mut Suite) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let len = rng.gen_range(1..=6);
        let g = random_reduced(&mut rng, len);
        let name = text(&g);
        let r = s.run(
            json!({"group": {"kind": "free", "rank": 2}, "experiment": "tau",
                             "parameters": {"g": name, "horizon": 5}}),
        )?;
        let tau = cyclic_length(&g);
        let oracle: Vec<usize> = (1..=5).map(|n| power(&g, n).len()).collect();
        for (n, &l) in oracle.iter().enumerate() {
            let n = n + 1;
            ensure(l == n * tau + g.len() - tau, || {
                format!("{name}: |g^{n}| = {l} breaks the law with tau {tau}")
            })?;
        }
        let got: Vec<usize> = r["lengths"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|v| f(v) as usize)
            .collect();
        ensure(got == oracle, || {
            format!("{name}: lengths {got:?}, oracle {oracle:?}")
        })?;
        ensure(u(&r["tau_exact"]) == tau as u64, || {
            format!("{name}: tau {} vs oracle {tau}", r["tau_exact"])
        })?;
        ensure(r["affine_law"] == json!(true), || {
            format!("{name}: law not reported")
        })?;
    }
    Ok("50 words, |g^n| = n*tau + |g| - tau exactly for n <= 5".into())
}

/// All nonempty contiguous subwords of `w^n` and `w^-n`.
fn subwords(w: &[i8], n: usize, out: &mut BTreeSet<Vec<i8>>) {
    for v in [power(w, n), power(&inv(w), n)] {
        for i in 0..v.len() {
            for j in i + 1..=v.len() {
                out.insert(v[i..j].to_vec());
            }
        }
    }
}

/// Word lengths in the generating set, by BFS on the subgraph spanned by
/// prefixes of `g` with up to two extra letters hanging off them.
fn truncated_graph_lengths(g: &[i8], gens: &BTreeSet<Vec<i8>>) -> Vec<usize> {
    let mut vertices: BTreeMap<Vec<i8>, usize> = BTreeMap::new();
    for i in 0..=g.len() {
        let p = g[..i].to_vec();
        let mut halo = vec![vec![]];
        for x in [1, -1, 2, -2] {
            halo.push(vec![x]);
            for y in [1, -1, 2, -2] {
                if y != -x {
                    halo.push(vec![x, y]);
                }
            }
        }
        for h in halo {
            let v = mul(&p, &h);
            let n = vertices.len();
            vertices.entry(v).or_insert(n);
        }
    }
    let keys: Vec<Vec<i8>> = {
        let mut k = vec![vec![]; vertices.len()];
        for (v, &i) in &vertices {
            k[i] = v.clone();
        }
        k
    };
    let mut dist = vec![usize::MAX; keys.len()];
    let src = vertices[&Vec::new()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(i) = queue.pop_front() {
        for x in gens {
            if let Some(&j) = vertices.get(&mul(&keys[i], x)) {
                if dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
    }
    (0..=g.len())
        .map(|i| dist[vertices[&g[..i].to_vec()]])
        .collect()
}

fn criterion_3(s: &mut Suite) -> Result<String, String> {
    let start = Instant::now();
    let r = s.run(json!({"group": {"kind": "free", "rank": 2}, "experiment": "compress",
        "parameters": {"genset": {"base": ["a", "b"], "families": [{"w": "ab^3", "cap": 2}, {"w": "ab^9", "cap": 3}]}, "k_max": 12}}))?;
    let fams: [(Vec<i8>, usize); 2] = [(parse("ab^3"), 2), (parse("ab^9"), 3)];
    let mut gens: BTreeSet<Vec<i8>> = [1, -1, 2, -2].iter().map(|&x| vec![x]).collect();
    for (w, n) in &fams {
        subwords(w, *n, &mut gens);
    }
    let rows = r["rows"].as_array().ok_or("no rows")?;
    ensure(rows.len() == 24, || format!("{} rows", rows.len()))?;
    let mut fit = f64::INFINITY;
    for (j, (w, n)) in fams.iter().enumerate() {
        let g = power(w, 12);
        let prefix = truncated_graph_lengths(&g, &gens);
        for k in 1..=12usize {
            let oracle = prefix[k * w.len()];
            let row = rows
                .iter()
                .find(|x| u(&x["family"]) == j as u64 && u(&x["k"]) == k as u64)
                .ok_or("missing row")?;
            ensure(u(&row["length"]) == oracle as u64, || {
                format!("|w_{}^{k}| = {} vs oracle {oracle}", j + 1, row["length"])
            })?;
            let upper = k.div_ceil(*n);
            ensure(oracle <= upper, || {
                format!("|w_{}^{k}| = {oracle} > {upper}", j + 1)
            })?;
            fit = fit.min((oracle as f64 + 2.0) * *n as f64 / k as f64);
        }
    }
    let big_k = f(&r["axis_k"]);
    let nominal = 1.0 / (2000.0 * big_k);
    ensure((f(&r["alpha_nominal"]) - nominal).abs() <= 1e-15, || {
        format!("alpha_nominal {} vs {nominal}", r["alpha_nominal"])
    })?;
    ensure((f(&r["alpha_fit"]) - fit).abs() <= 1e-12, || {
        format!("alpha_fit {} vs oracle {fit}", r["alpha_fit"])
    })?;
    ensure(fit >= nominal, || {
        format!("fitted alpha {fit} below {nominal}")
    })?;
    ensure(u(&r["upper_violations"]) == 0, || {
        "upper bound violated".into()
    })?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 300.0, || format!("took {secs:.1}s"))?;
    Ok(format!("24 lengths match the BFS oracle, all <= ceil(k/n_j); alpha fit {fit:.3} >= {nominal:.2e} (K = {big_k}); {secs:.2}s"))
}

fn prefixes(m: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for n in 1..=m as i64 {
        out = out
            .into_iter()
            .flat_map(|p| (1..=n).map(move |v| [p.clone(), vec![v]].concat()))
            .collect();
    }
    out
}

fn sup_diff(r: &[i64], s: &[i64]) -> i64 {
    r.iter().zip(s).map(|(a, b)| a - b).max().unwrap_or(0)
}

fn criterion_4(s: &mut Suite) -> Result<String, String> {
    let r = s.run(json!({"group": {"kind": "free", "rank": 2}, "experiment": "borel-order",
                         "parameters": {"bf": {"f1": "a", "f2": "b", "c": 3}, "prefix_length": 4, "k_values": [0, 1, 2], "triples": 10}}))?;
    let all = prefixes(4);
    ensure(all.len() == 24, || format!("{} prefixes", all.len()))?;
    let expected = all
        .iter()
        .flat_map(|x| all.iter().map(move |y| sup_diff(x, y)))
        .filter(|k| (0..=2).contains(k))
        .count();
    ensure(u(&r["pairs_checked"]) == expected as u64, || {
        format!("{} pairs checked, oracle {expected}", r["pairs_checked"])
    })?;
    ensure(u(&r["violations"]) == 0, || {
        format!("{} violations: {}", r["violations"], r["failures"])
    })?;
    Ok(format!(
        "{expected} prefix pairs of length 4 with k in {{0,1,2}}, zero violations"
    ))
}

fn criterion_5(s: &mut Suite) -> Result<String, String> {
    let r = s.run(json!({"group": {"kind": "free", "rank": 2}, "experiment": "borel-order",
                         "parameters": {"families": ["ab", "ab^2", "ab^3"], "big_n": [2, 2, 2], "prefix_length": 1,
                                        "k_values": [0], "triples": 1000, "triple_length": 8}}))?;
    let q = &r["quasi_order"];
    ensure(u(&q["triples"]) == 1000 && u(&q["length"]) == 8, || {
        format!("ran {q}")
    })?;
    ensure(u(&q["reflexivity_violations"]) == 0, || {
        format!("reflexivity: {q}")
    })?;
    ensure(u(&q["triangle_violations"]) == 0, || {
        format!("triangle: {q}")
    })?;
    // the comparator itself, against a direct maximum
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut draw = || {
        (1..=8i64)
            .map(|n| rng.gen_range(1..=n))
            .collect::<Vec<i64>>()
    };
    let pi =
        |v: &[i64]| PiPrefix::new(v.iter().map(|&x| x as u32).collect()).map_err(|e| e.to_string());
    for _ in 0..1000 {
        let (a, b, c) = (draw(), draw(), draw());
        let d = |x: &[i64], y: &[i64]| -> Result<i64, String> {
            let got = qks_compare(&pi(x)?, &pi(y)?, 0)
                .map_err(|e| e.to_string())?
                .sup_diff;
            ensure(got == sup_diff(x, y), || {
                format!("sup_diff({x:?}, {y:?}) = {got}")
            })?;
            Ok(got)
        };
        ensure(d(&a, &a)? == 0, || format!("sup_diff({a:?}, itself) != 0"))?;
        ensure(d(&a, &c)? <= d(&a, &b)? + d(&b, &c)?, || {
            format!("triangle fails on {a:?} {b:?} {c:?}")
        })?;
    }
    Ok(
        "1000 triples of length 8: reflexive, triangle holds, comparator matches direct maxima"
            .into(),
    )
}

fn binary(args: &[&str], threads: Option<&str>) -> Result<std::process::Output, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hypactions"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("HYPACTIONS_THREADS", t);
    }
    cmd.output().map_err(|e| e.to_string())
}

fn criterion_6(s: &mut Suite, dir: &Path) -> Result<String, String> {
    let raw = json!({"group": {"kind": "bs", "m": 2, "n": 3}, "experiment": "qm-certify",
                     "parameters": {"g": "t", "radius": 4, "qm": {"kind": "exponent_sum"}}});
    let r = s.run(raw.clone())?;
    let cfg = dir.join("bs23.json");
    std::fs::write(&cfg, raw.to_string()).map_err(|e| e.to_string())?;
    let out = dir.join("bs23.out");
    let ran = binary(
        &["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()],
        None,
    )?;
    ensure(ran.status.success(), || {
        format!("run failed: {}", String::from_utf8_lossy(&ran.stderr))
    })?;
    let file = out.join("summary.json");
    let summary: Value = serde_json::from_slice(&std::fs::read(&file).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure(summary["results"] == r, || {
        "binary and library summaries differ".into()
    })?;
    let cert = &r["certificate"];
    ensure(f(&r["defect"]["empirical"]) == 0.0, || {
        format!("defect {}", r["defect"])
    })?;
    ensure(f(&cert["m"]) == 1.0, || format!("M = {}", cert["m"]))?;
    ensure(
        f(&cert["value"]) == 1.0 && f(&cert["value_error"]) == 0.0,
        || format!("value {}", cert["value"]),
    )?;
    ensure(cert["witness"] == json!("t"), || {
        format!("witness {}", cert["witness"])
    })?;
    // rendered elements are Britton-reduced, so q is the exponent sum of t
    // and the pseudo-length is the number of t-letters
    let t = (b't' - b'a' + 1) as i8;
    for i in cert["inequalities"].as_array().ok_or("no inequalities")? {
        let e = i["element"].as_str().unwrap_or("");
        let w = parse(e);
        let q = w
            .iter()
            .map(|&x| i64::from(x == t) - i64::from(x == -t))
            .sum::<i64>() as f64;
        let l = w.iter().filter(|&&x| x.abs() == t).count() as f64;
        ensure(f(&i["length"]) == l, || {
            format!("l({e}) = {} vs {l}", i["length"])
        })?;
        ensure(f(&i["q"]) == q, || format!("q({e}) = {} vs {q}", i["q"]))?;
        ensure(f(&i["q"]).abs() <= f(&i["length"]) + 1.0, || {
            format!("|q| > l + 1 at {e}")
        })?;
    }
    let checked = binary(&["verify", file.to_str().unwrap()], None)?;
    ensure(checked.status.success(), || {
        format!(
            "verify failed: {}",
            String::from_utf8_lossy(&checked.stderr)
        )
    })?;
    let mut tampered = summary.clone();
    tampered["results"]["certificate"]["m"] = json!(0.5);
    let bad = dir.join("tampered.json");
    std::fs::write(&bad, tampered.to_string()).map_err(|e| e.to_string())?;
    let rejected = binary(&["verify", bad.to_str().unwrap()], None)?;
    ensure(rejected.status.code() == Some(1), || {
        "tampered certificate accepted".into()
    })?;
    Ok(format!(
        "defect 0 on {} elements, M = 1, value 1 at t; verify accepts it and rejects M = 1/2",
        r["ball"]
    ))
}

fn criterion_7(s: &mut Suite) -> Result<String, String> {
    let r = s.run(json!({"group": {"kind": "sl2", "field": {"d": 2}}, "experiment": "sl2-embed", "parameters": {"x": "sqrt2-1"}}))?;
    ensure(r["class_e1"] == json!("elliptic"), || {
        format!("e1 class {}", r["class_e1"])
    })?;
    ensure(r["class_e2"] == json!("loxodromic"), || {
        format!("e2 class {}", r["class_e2"])
    })?;
    ensure(r["tau_e1"].is_null(), || {
        format!("elliptic with tau {}", r["tau_e1"])
    })?;
    let x = -(2f64.sqrt()) - 1.0;
    let formula = 2.0 * ((2.0 * x).abs() / 2.0).acosh();
    ensure((formula - TAU_MINUS).abs() <= 1e-12, || {
        format!("f64 arccosh {formula}")
    })?;
    let tau = f(&r["tau_e2"]["mid"]);
    ensure((tau - TAU_MINUS).abs() <= 1e-9, || {
        format!("tau {tau} vs {TAU_MINUS}")
    })?;
    let lo = f(&r["tau_e2"]["lo"]);
    let hi = f(&r["tau_e2"]["hi"]);
    ensure(lo <= TAU_MINUS && TAU_MINUS <= hi, || {
        format!("[{lo}, {hi}] misses {TAU_MINUS}")
    })?;
    let sq = f(&r["tau_square_e2"]["mid"]);
    ensure((sq - 2.0 * tau).abs() <= 1e-9, || {
        format!("tau(A^2) = {sq}, 2 tau(A) = {}", 2.0 * tau)
    })?;
    Ok(format!("elliptic under +, loxodromic under -; tau = {tau:.12} (|err| {:.1e}); tau(A^2) - 2 tau(A) = {:.1e}",
               (tau - TAU_MINUS).abs(), sq - 2.0 * tau))
}

fn rational(rng: &mut ChaCha8Rng) -> Q {
    let q = rng.gen_range(1..=4);
    Q::new(rng.gen_range(1..=12 * q), q)
}

fn metric_json(d: &[[Q; 4]; 4]) -> Value {
    json!(d
        .iter()
        .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn random_metric(rng: &mut ChaCha8Rng) -> [[Q; 4]; 4] {
    loop {
        let mut d = [[Q::from_integer(0); 4]; 4];
        for i in 0..4 {
            for j in i + 1..4 {
                d[i][j] = rational(rng);
                d[j][i] = d[i][j];
            }
        }
        let ok = (0..4).all(|i| (0..4).all(|j| (0..4).all(|k| d[i][k] <= d[i][j] + d[j][k])));
        if ok {
            return d;
        }
    }
}

/// Four leaves of a tree: `{x, y}` and `{z, t}` hang off the two ends of an edge.
fn random_tree_metric(rng: &mut ChaCha8Rng) -> [[Q; 4]; 4] {
    let mut order = [0, 1, 2, 3];
    for i in (1..4).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let leg: Vec<Q> = (0..4).map(|_| Q::new(rng.gen_range(1..=12), 2)).collect();
    let bridge = Q::new(rng.gen_range(0..=12), 2);
    let mut d = [[Q::from_integer(0); 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            if a != b {
                let cross = (a < 2) != (b < 2);
                d[order[a]][order[b]] =
                    leg[a] + leg[b] + if cross { bridge } else { Q::from_integer(0) };
            }
        }
    }
    d
}

fn criterion_8(s: &mut Suite) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut slack = 0.0f64;
    let mut iters = 0;
    for i in 0..20 {
        let d = random_metric(&mut rng);
        // sup_x |d(a, x) - d(b, x)| = d(a, b), checked directly
        for a in 0..4 {
            for b in 0..4 {
                let sup = (0..4)
                    .map(|x| (d[a][x] - d[b][x]).max(d[b][x] - d[a][x]))
                    .max()
                    .unwrap();
                ensure(sup == d[a][b], || {
                    format!("metric {i}: Kuratowski oracle fails at ({a}, {b})")
                })?;
            }
        }
        let r = s.run(json!({"experiment": "tightspan", "seed": i,
                             "parameters": {"metric": metric_json(&d), "starts": 100, "tol": 1e-9, "max_iter": 10_000, "exact": true}}))?;
        ensure(u(&r["kuratowski"]["violations"]) == 0, || {
            format!("metric {i}: {}", r["kuratowski"])
        })?;
        let p = &r["projection"];
        ensure(u(&p["converged"]) == 100 && u(&p["failed"]) == 0, || {
            format!("metric {i}: {p}")
        })?;
        ensure(f(&p["max_slack"]) < 1e-9, || {
            format!("metric {i}: slack {}", p["max_slack"])
        })?;
        ensure(u(&p["max_iterations"]) <= 10_000, || {
            format!("metric {i}: {} iterations", p["max_iterations"])
        })?;
        slack = slack.max(f(&p["max_slack"]));
        iters = iters.max(u(&p["max_iterations"]));
    }
    for i in 0..20 {
        let d = random_tree_metric(&mut rng);
        let r = s.run(json!({"experiment": "tightspan", "seed": 100 + i,
                             "parameters": {"metric": metric_json(&d), "starts": 0, "exact": true}}))?;
        ensure(u(&r["hull_delta"]["sample"]) == 4, || {
            format!("tree {i}: sample {}", r["hull_delta"]["sample"])
        })?;
        ensure(f(&r["hull_delta"]["delta"]) == 0.0, || {
            format!("tree {i}: hull delta {}", r["hull_delta"]["delta"])
        })?;
    }
    Ok(format!("20 metrics exactly isometric, 2000 projections with slack <= {slack:.3e} in <= {iters} iterations; 20 tree metrics give delta 0"))
}

fn criterion_9(s: &mut Suite) -> Result<String, String> {
    let r = s.run(json!({"group": {"kind": "free", "rank": 2}, "experiment": "cone-off", "parameters": {"g": "a", "radius": 4, "a": 1}}))?;
    ensure(u(&r["violations"]) == 0, || {
        format!("{} violations", r["violations"])
    })?;
    let edges = r["edges"].as_array().ok_or("no edges")?;
    ensure(!edges.is_empty(), || "no edges added".into())?;
    let orbit: Vec<Vec<i8>> = (-4i64..=4).map(|k| parse(&format!("a^{k}"))).collect();
    let to_orbit = |x: &[i8]| orbit.iter().map(|o| mul(&inv(o), x).len()).min().unwrap();
    for e in edges {
        for end in [&e[0], &e[1]] {
            let x = parse(end.as_str().unwrap_or(""));
            ensure(x.len() <= 4, || format!("{end} outside the ball"))?;
            ensure(to_orbit(&x) > 1, || format!("{end} within 1 of <a>"))?;
        }
    }
    Ok(format!(
        "{} added edges, every endpoint at distance > 1 from <a>",
        edges.len()
    ))
}

fn criterion_10(s: &mut Suite, dir: &Path) -> Result<String, String> {
    let runs = std::mem::take(&mut s.runs);
    for (raw, first) in &runs {
        let config = ExperimentConfig::from_value(raw).map_err(|e| e.to_string())?;
        let again = render_summary(
            &run(&config, Path::new("."))
                .map_err(|e| e.to_string())?
                .summary,
        );
        ensure(&again == first, || format!("rerun differs for {raw}"))?;
    }
    // thread count must not leak into the bytes either
    let cfg = dir.join("delta.json");
    std::fs::write(
        &cfg,
        json!({"group": {"kind": "free", "rank": 2}, "experiment": "delta", "seed": 4,
                                "parameters": {"radius": 4, "mode": "sampled", "samples": 200_000}})
        .to_string(),
    )
    .map_err(|e| e.to_string())?;
    let mut bytes = Vec::new();
    for (t, threads) in [("1", "t1"), ("4", "t4")] {
        let out = dir.join(threads);
        let ran = binary(
            &["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()],
            Some(t),
        )?;
        ensure(ran.status.success(), || {
            String::from_utf8_lossy(&ran.stderr).into_owned()
        })?;
        bytes.push(std::fs::read(out.join("summary.json")).map_err(|e| e.to_string())?);
    }
    ensure(bytes[0] == bytes[1], || {
        "summaries differ between 1 and 4 threads".into()
    })?;
    Ok(format!(
        "{} summaries byte-identical on rerun; sampled delta identical on 1 and 4 threads",
        runs.len()
    ))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut s = Suite {
        runs: Vec::new(),
        failed: Vec::new(),
    };
    let r = criterion_1(&mut s);
    s.report(1, "tree hyperbolicity", r);
    let r = criterion_2(&mut s);
    s.report(2, "translation-length law", r);
    let r = criterion_3(&mut s);
    s.report(3, "compressed length bounds", r);
    let r = criterion_4(&mut s);
    s.report(4, "order preservation", r);
    let r = criterion_5(&mut s);
    s.report(5, "sup-difference comparator", r);
    let r = criterion_6(&mut s, dir.path());
    s.report(6, "BS(2,3) anisotropy certificate", r);
    let r = criterion_7(&mut s);
    s.report(7, "SL2 embedding split", r);
    let r = criterion_8(&mut s);
    s.report(8, "tight span", r);
    let r = criterion_9(&mut s);
    s.report(9, "cone-off sanity", r);
    let r = criterion_10(&mut s, dir.path());
    s.report(10, "determinism", r);
    if s.failed.is_empty() {
        println!("acceptance: 10/10 criteria pass");
    } else {
        println!("acceptance: failed criteria {:?}", s.failed);
        std::process::exit(1);
    }
}
