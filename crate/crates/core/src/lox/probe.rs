use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LoxError;
use crate::group::{Ball, Group};
use crate::metric::{element_distance, Length};

/// `(a, m, n)` with `max{d(a, 1), d(a·gᵐ, hⁿ)} ≤ ε`, base point `1`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EquivalenceWitness<E> {
    pub a: E,
    pub m: i64,
    pub n: i64,
    pub epsilon: f64,
    /// The value of the left-hand side at discovery.
    pub achieved: f64,
}

impl<E: Clone + Ord + core::fmt::Debug> EquivalenceWitness<E> {
    /// Re-evaluates the inequality from scratch.
    pub fn verify<G: Group<Element = E>, L: Length<E> + ?Sized>(
        &self,
        group: &G,
        len: &L,
        g: &E,
        h: &E,
    ) -> Result<bool, LoxError> {
        let v = witness_value(group, len, &self.a, g, h, self.m, self.n)?;
        Ok(v <= self.epsilon + crate::ABS_TOL)
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", tag = "outcome"))]
pub enum WitnessSearch<E> {
    Found(EquivalenceWitness<E>),
    /// Nothing in the searched range; evidence only.
    Exhausted {
        candidates: usize,
        max_power: i64,
        evaluations: u64,
        undetermined: u64,
    },
}

fn witness_value<G: Group, L: Length<G::Element> + ?Sized>(
    group: &G,
    len: &L,
    a: &G::Element,
    g: &G::Element,
    h: &G::Element,
    m: i64,
    n: i64,
) -> Result<f64, LoxError> {
    let la = element_distance(group, len, &group.identity(), a)?;
    let agm = group.multiply(a, &group.pow(g, m));
    let d = element_distance(group, len, &agm, &group.pow(h, n))?;
    Ok(la.max(d))
}

/// Scans `a` over `candidates` (in order), then `m + n`, then `m`, with
/// `N < m, n ≤ max_power`. Evaluations that leave the length's domain count
/// as undetermined and are skipped.
#[allow(clippy::too_many_arguments)]
pub fn equivalence_witness_search<G: Group, L: Length<G::Element> + ?Sized>(
    group: &G,
    len: &L,
    g: &G::Element,
    h: &G::Element,
    epsilon: f64,
    big_n: i64,
    candidates: &[G::Element],
    max_power: i64,
    cap: u64,
) -> Result<WitnessSearch<G::Element>, LoxError> {
    let g_pows: Vec<G::Element> = (0..=max_power.max(0)).map(|k| group.pow(g, k)).collect();
    let h_pows: Vec<G::Element> = (0..=max_power.max(0)).map(|k| group.pow(h, k)).collect();
    let lo = big_n.max(0) + 1;
    let mut evaluations = 0u64;
    let mut undetermined = 0u64;
    for a in candidates {
        let Some(la) = len.length(a) else {
            undetermined += 1;
            continue;
        };
        if la > epsilon + crate::ABS_TOL {
            continue;
        }
        let a_inv = group.invert(a);
        for total in 2 * lo..=2 * max_power {
            let m_lo = lo.max(total - max_power);
            let m_hi = (total - lo).min(max_power);
            for m in m_lo..=m_hi {
                let n = total - m;
                evaluations += 1;
                if evaluations > cap {
                    return Err(LoxError::BudgetExceeded { cap });
                }
                // (a gᵐ)⁻¹ hⁿ = g⁻ᵐ a⁻¹ hⁿ
                let x = group.multiply(
                    &group.invert(&g_pows[m as usize]),
                    &group.multiply(&a_inv, &h_pows[n as usize]),
                );
                match len.length(&x) {
                    None => undetermined += 1,
                    Some(d) if la.max(d) <= epsilon + crate::ABS_TOL => {
                        return Ok(WitnessSearch::Found(EquivalenceWitness {
                            a: a.clone(),
                            m,
                            n,
                            epsilon,
                            achieved: la.max(d),
                        }))
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(WitnessSearch::Exhausted {
        candidates: candidates.len(),
        max_power,
        evaluations,
        undetermined,
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeTrial<E> {
    pub x: E,
    pub y: E,
    pub x2: E,
    pub y2: E,
    /// First `g` in ball order minimizing `max{d(gx,x′), d(gy,y′)}`.
    pub best_g: Option<E>,
    pub best_value: f64,
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IsotropyReport<E> {
    pub d: f64,
    pub seed: u64,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Trial with the largest best value (first one on ties).
    pub hardest: Option<ProbeTrial<E>>,
}

/// Searches `g` over the ball for one pair of pairs.
pub fn isotropy_check<G: Group, L: Length<G::Element> + ?Sized>(
    group: &G,
    ball: &Ball<G::Element>,
    len: &L,
    (x, y): (&G::Element, &G::Element),
    (x2, y2): (&G::Element, &G::Element),
    d: f64,
) -> ProbeTrial<G::Element> {
    let mut best: Option<(f64, &G::Element)> = None;
    for g in ball.elements() {
        let gx = group.multiply(g, x);
        let gy = group.multiply(g, y);
        let (Ok(u), Ok(v)) = (
            element_distance(group, len, &gx, x2),
            element_distance(group, len, &gy, y2),
        ) else {
            continue;
        };
        let val = u.max(v);
        if best.map_or(true, |(b, _)| val < b) {
            best = Some((val, g));
            if val <= crate::ABS_TOL {
                break;
            }
        }
    }
    let (best_value, best_g) = match best {
        Some((v, g)) => (v, Some(g.clone())),
        None => (f64::INFINITY, None),
    };
    ProbeTrial {
        x: x.clone(),
        y: y.clone(),
        x2: x2.clone(),
        y2: y2.clone(),
        best_g,
        best_value,
        success: best_value <= d + crate::ABS_TOL,
    }
}

/// Samples `samples` pairs of equidistant pairs from the ball and runs
/// [`isotropy_check`] on each. Distances are matched exactly.
pub fn isotropy_probe<G: Group, L: Length<G::Element> + ?Sized>(
    group: &G,
    ball: &Ball<G::Element>,
    len: &L,
    d: f64,
    samples: usize,
    seed: u64,
) -> IsotropyReport<G::Element> {
    let pts = ball.elements();
    let mut classes: BTreeMap<u64, Vec<(usize, usize)>> = BTreeMap::new();
    let mut pairs = Vec::new();
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            if let Ok(dist) = element_distance(group, len, &pts[i], &pts[j]) {
                classes.entry(dist.to_bits()).or_default().push((i, j));
                pairs.push((dist.to_bits(), i, j));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trials = 0;
    let mut successes = 0;
    let mut hardest: Option<ProbeTrial<G::Element>> = None;
    if !pairs.is_empty() {
        for _ in 0..samples {
            let (key, i, j) = pairs[rng.gen_range(0..pairs.len())];
            let class = &classes[&key];
            let (k, l) = class[rng.gen_range(0..class.len())];
            let trial = isotropy_check(group, ball, len, (&pts[i], &pts[j]), (&pts[k], &pts[l]), d);
            trials += 1;
            successes += trial.success as usize;
            if hardest
                .as_ref()
                .map_or(true, |h| trial.best_value > h.best_value)
            {
                hardest = Some(trial);
            }
        }
    }
    let success_rate = if trials == 0 {
        0.0
    } else {
        successes as f64 / trials as f64
    };
    IsotropyReport {
        d,
        seed,
        trials,
        successes,
        success_rate,
        hardest,
    }
}
