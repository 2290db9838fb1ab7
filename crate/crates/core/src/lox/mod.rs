//! Translation lengths, classification, quasi-axes and witness searches.

mod axis;
mod probe;

use alloc::vec::Vec;
use thiserror::Error;

use crate::group::{BsElement, FreeWord, Group};
use crate::metric::{Length, MetricError};

pub use axis::{build_quasi_axis, QuasiAxis};
pub use probe::{
    equivalence_witness_search, isotropy_check, isotropy_probe, EquivalenceWitness, IsotropyReport,
    ProbeTrial, WitnessSearch,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LoxError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("label of length {label} is longer than the word length {word_length}")]
    NonGeodesicLabel { label: usize, word_length: f64 },
    #[error("label does not multiply out to the element")]
    LabelMismatch,
    #[error("denominator translation length estimate is zero")]
    NotLoxodromicDownstairs,
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("search budget of {cap} evaluations exceeded")]
    BudgetExceeded { cap: u64 },
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TranslationEstimate {
    /// `min_{n ≤ horizon} ℓ(gⁿ)/n`, an upper bound on the translation length.
    pub upper: f64,
    /// `ℓ(gⁿ)/n` for `n = 1..=horizon`.
    pub trace: Vec<f64>,
    /// `ℓ(gⁿ)` for `n = 1..=horizon`.
    pub lengths: Vec<f64>,
}

impl TranslationEstimate {
    pub fn horizon(&self) -> usize {
        self.trace.len()
    }
}

/// Ratios `ℓ(gⁿ)/n` up to `horizon`; each is an upper bound on `τ(g)` by subadditivity.
pub fn translation_length_estimate<G: Group, L: Length<G::Element> + ?Sized>(
    group: &G,
    g: &G::Element,
    len: &L,
    horizon: usize,
) -> Result<TranslationEstimate, LoxError> {
    if horizon == 0 {
        return Err(LoxError::ZeroHorizon);
    }
    let mut power = group.identity();
    let mut trace = Vec::with_capacity(horizon);
    let mut lengths = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        power = group.multiply(&power, g);
        let l = len
            .length(&power)
            .ok_or_else(|| MetricError::DomainMiss(group.render(&power)))?;
        lengths.push(l);
        trace.push(l / n as f64);
    }
    let upper = trace.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TranslationEstimate {
        upper,
        trace,
        lengths,
    })
}

/// Exact stable word length in a free basis: the length of the cyclic core.
pub fn translation_length_exact_free(g: &FreeWord) -> usize {
    g.cyclic_reduce().0.len()
}

/// Exact translation length of a BS(m,n) element on its Bass-Serre tree,
/// from `τ = max(0, d(v, g²v) − d(v, gv))`.
pub fn translation_length_bass_serre(
    group: &crate::group::BaumslagSolitar,
    g: &BsElement,
) -> usize {
    let g2 = group.multiply(g, g);
    g2.t_length().saturating_sub(g.t_length())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    EllipticEvidence,
    Loxodromic,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", tag = "kind"))]
pub enum Certificate {
    FreeCyclicCore {
        core_length: usize,
    },
    BassSerre {
        translation: usize,
    },
    Sl2Trace,
    /// `ℓ(gⁿ) ≥ λn − c` across the horizon; evidence, not proof.
    AffineFit {
        lambda: f64,
        c: f64,
    },
    None,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IsometryClass {
    pub verdict: Verdict,
    pub tau_upper: f64,
    pub tau_lower: f64,
    pub horizon: usize,
    pub certificate: Certificate,
}

/// Free group element acting on its Cayley tree.
pub fn classify_free(g: &FreeWord, horizon: usize) -> IsometryClass {
    let tau = translation_length_exact_free(g);
    IsometryClass {
        verdict: if tau > 0 {
            Verdict::Loxodromic
        } else {
            Verdict::EllipticEvidence
        },
        tau_upper: tau as f64,
        tau_lower: tau as f64,
        horizon,
        certificate: Certificate::FreeCyclicCore { core_length: tau },
    }
}

/// BS(m,n) element acting on the Bass-Serre tree.
pub fn classify_bass_serre(
    group: &crate::group::BaumslagSolitar,
    g: &BsElement,
    horizon: usize,
) -> IsometryClass {
    let tau = translation_length_bass_serre(group, g);
    IsometryClass {
        verdict: if tau > 0 {
            Verdict::Loxodromic
        } else {
            Verdict::EllipticEvidence
        },
        tau_upper: tau as f64,
        tau_lower: tau as f64,
        horizon,
        certificate: Certificate::BassSerre { translation: tau },
    }
}

/// Uncertified classification from a horizon estimate.
///
/// Fits `ℓ(gⁿ) ≥ λn − c` with `λ` the slope between the first and last
/// power; never returns [`Verdict::Loxodromic`] and keeps `tau_lower = 0`.
pub fn classify_by_estimate(est: &TranslationEstimate) -> IsometryClass {
    let h = est.horizon();
    let v = &est.lengths;
    let mut class = IsometryClass {
        verdict: Verdict::Unknown,
        tau_upper: est.upper,
        tau_lower: 0.0,
        horizon: h,
        certificate: Certificate::None,
    };
    if est.upper <= crate::ABS_TOL {
        class.verdict = Verdict::EllipticEvidence;
        return class;
    }
    if h >= 2 {
        let lambda = (v[h - 1] - v[0]) / (h - 1) as f64;
        if lambda > crate::ABS_TOL {
            let c = v
                .iter()
                .enumerate()
                .map(|(i, &l)| lambda * (i + 1) as f64 - l)
                .fold(f64::NEG_INFINITY, f64::max);
            class.certificate = Certificate::AffineFit { lambda, c };
        } else {
            let half = h / 2;
            let early = v[..half].iter().copied().fold(0.0, f64::max);
            let late = v[half..].iter().copied().fold(0.0, f64::max);
            if late <= early + crate::ABS_TOL {
                class.verdict = Verdict::EllipticEvidence;
            }
        }
    }
    class
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CompressionRatio {
    pub ratio: f64,
    pub upstairs: TranslationEstimate,
    pub downstairs: TranslationEstimate,
}

/// Ratio of horizon estimates `τ_R(g)/τ_S(g)`.
pub fn compression_function<G: Group, LR, LS>(
    group: &G,
    g: &G::Element,
    l_r: &LR,
    l_s: &LS,
    horizon: usize,
) -> Result<CompressionRatio, LoxError>
where
    LR: Length<G::Element> + ?Sized,
    LS: Length<G::Element> + ?Sized,
{
    let upstairs = translation_length_estimate(group, g, l_r, horizon)?;
    let downstairs = translation_length_estimate(group, g, l_s, horizon)?;
    if downstairs.upper <= crate::ABS_TOL {
        return Err(LoxError::NotLoxodromicDownstairs);
    }
    Ok(CompressionRatio {
        ratio: upstairs.upper / downstairs.upper,
        upstairs,
        downstairs,
    })
}

/// `Σ dⱼ − 2(n−1)(C + 8δ)` for `n` consecutive segment lengths `dⱼ`.
pub fn x0xn_lower_bound(segments: &[f64], c: f64, delta: f64) -> f64 {
    if segments.is_empty() {
        return 0.0;
    }
    let n = segments.len() as f64;
    segments.iter().sum::<f64>() - 2.0 * (n - 1.0) * (c + 8.0 * delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_ball, BaumslagSolitar, FreeGroup};
    use crate::metric::free_word_length;
    use alloc::vec;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(s).unwrap()
    }

    #[test]
    fn estimate_examples() {
        let f2 = FreeGroup::new(2);
        let e = translation_length_estimate(&f2, &w("1"), &free_word_length, 3).unwrap();
        assert_eq!(e.upper, 0.0);
        let e = translation_length_estimate(&f2, &w("ab"), &free_word_length, 5).unwrap();
        assert_eq!(e.upper, 2.0);
        assert_eq!(e.trace, vec![2.0; 5]);
        let e = translation_length_estimate(&f2, &w("abA"), &free_word_length, 5).unwrap();
        assert_eq!(e.trace, vec![3.0, 2.0, 5.0 / 3.0, 1.5, 7.0 / 5.0]);
        assert_eq!(e.upper, 1.4);
    }

    #[test]
    fn estimate_reports_domain_miss() {
        let f2 = FreeGroup::new(2);
        let ball = enumerate_ball(&f2, &f2.standard_generators(), 3, 1 << 16).unwrap();
        let map = ball.length_map();
        let err = translation_length_estimate(&f2, &w("ab"), &map, 2).unwrap_err();
        assert_eq!(
            err,
            LoxError::Metric(MetricError::DomainMiss("abab".into()))
        );
    }

    #[test]
    fn exact_free_examples() {
        assert_eq!(translation_length_exact_free(&w("1")), 0);
        assert_eq!(translation_length_exact_free(&w("abA")), 1);
        let g = w("abbab");
        assert_eq!(translation_length_exact_free(&g), 5);
        assert_eq!(g.mul(&g).len(), 10);
    }

    #[test]
    fn bass_serre_translation() {
        let bs = BaumslagSolitar::new(2, 3);
        let t = bs.t();
        assert_eq!(translation_length_bass_serre(&bs, &t), 1);
        assert_eq!(translation_length_bass_serre(&bs, &bs.a()), 0);
        // conjugate of a is elliptic, of t^2 has translation 2
        let c = bs.parse("at").unwrap();
        assert_eq!(
            translation_length_bass_serre(&bs, &bs.conjugate(&bs.a(), &c)),
            0
        );
        assert_eq!(
            translation_length_bass_serre(&bs, &bs.conjugate(&bs.pow(&t, 2), &c)),
            2
        );
        assert_eq!(classify_bass_serre(&bs, &t, 4).verdict, Verdict::Loxodromic);
        // product of two elliptics with disjoint fixed trees
        let x = bs.parse("taTa").unwrap();
        assert_eq!(translation_length_bass_serre(&bs, &x), 2);
    }

    #[test]
    fn classification() {
        assert_eq!(classify_free(&w("abA"), 5).verdict, Verdict::Loxodromic);
        assert_eq!(classify_free(&w("1"), 5).verdict, Verdict::EllipticEvidence);
        let f2 = FreeGroup::new(2);
        let est = translation_length_estimate(&f2, &w("abA"), &free_word_length, 6).unwrap();
        let c = classify_by_estimate(&est);
        assert_eq!(c.verdict, Verdict::Unknown);
        assert!(c.tau_lower <= c.tau_upper);
        match c.certificate {
            Certificate::AffineFit { lambda, c } => {
                assert_eq!(lambda, 1.0);
                for (i, &l) in est.lengths.iter().enumerate() {
                    assert!(l >= lambda * (i + 1) as f64 - c);
                }
            }
            other => panic!("{other:?}"),
        }
        let bounded = TranslationEstimate {
            upper: 0.5,
            trace: vec![2.0, 1.0, 2.0 / 3.0, 0.5],
            lengths: vec![2.0; 4],
        };
        assert_eq!(
            classify_by_estimate(&bounded).verdict,
            Verdict::EllipticEvidence
        );
    }

    #[test]
    fn compression_examples() {
        let f2 = FreeGroup::new(2);
        let g = w("ab");
        let r = compression_function(&f2, &g, &free_word_length, &free_word_length, 4).unwrap();
        assert_eq!(r.ratio, 1.0);
        let half = |x: &FreeWord| Some(0.5 * x.len() as f64);
        assert_eq!(
            compression_function(&f2, &g, &half, &free_word_length, 4)
                .unwrap()
                .ratio,
            0.5
        );
        let big = enumerate_ball(&f2, &[w("a"), w("b"), w("ab")], 6, 1 << 20)
            .unwrap()
            .length_map();
        let r = compression_function(&f2, &g, &big, &free_word_length, 6).unwrap();
        assert_eq!(r.ratio, 0.5);
        assert_eq!(
            compression_function(&f2, &w("1"), &free_word_length, &free_word_length, 2),
            Err(LoxError::NotLoxodromicDownstairs)
        );
    }

    #[test]
    fn x0xn_hand_cases() {
        assert_eq!(x0xn_lower_bound(&[5.0], 1.0, 1.0), 5.0);
        assert_eq!(x0xn_lower_bound(&[5.0, 5.0], 1.0, 0.0), 8.0);
        assert_eq!(
            x0xn_lower_bound(&[3.0, 4.0, 5.0], 0.5, 0.25),
            12.0 - 4.0 * 2.5
        );
    }
}
