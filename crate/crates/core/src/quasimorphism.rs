//! Quasi-morphisms, defects, homogenization and anisotropy certificates.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use crate::group::{BsElement, FreeWord, Group};
use crate::metric::Length;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QmError {
    #[error("empty domain")]
    EmptyDomain,
    #[error("homogenized value at the witness is indistinguishable from zero ({value} with error {error})")]
    ZeroValue { value: f64, error: f64 },
    #[error("fitted constant {m} exceeds the cap {cap}")]
    NotSubordinate { m: f64, cap: f64 },
    #[error("length undefined at {0}")]
    DomainMiss(String),
    #[error("power must be at least 1")]
    ZeroPower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum QmKind {
    Brooks,
    ExponentSum,
    LinearCombination,
    Custom,
}

pub trait QuasiMorphism<E> {
    fn eval(&self, g: &E) -> f64;
    fn kind(&self) -> QmKind;

    /// Analytic defect bound, if one is known.
    fn defect_bound(&self) -> Option<f64> {
        None
    }

    /// Exact homogenization `lim q(gⁿ)/n`, if computable directly.
    fn homogenized(&self, _g: &E) -> Option<f64> {
        None
    }
}

/// Overlapping occurrences of `pattern` in `text`.
fn count_occurrences(
    text: &[crate::group::Generator],
    pattern: &[crate::group::Generator],
) -> usize {
    if pattern.is_empty() || pattern.len() > text.len() {
        return 0;
    }
    text.windows(pattern.len())
        .filter(|w| *w == pattern)
        .count()
}

/// Occurrences of `pattern` in the cyclic word `core`, one per starting position.
fn count_cyclic(core: &[crate::group::Generator], pattern: &[crate::group::Generator]) -> usize {
    let n = core.len();
    if n == 0 || pattern.is_empty() {
        return 0;
    }
    (0..n)
        .filter(|&o| {
            pattern
                .iter()
                .enumerate()
                .all(|(t, g)| core[(o + t) % n] == *g)
        })
        .count()
}

/// Brooks counting quasi-morphism `q_w(g) = #w − #w⁻¹` in the reduced word
/// of `g`, overlaps allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Brooks {
    w: FreeWord,
    w_inv: FreeWord,
    /// Set when `w` is a proper power; the construction still works.
    pub warning: Option<&'static str>,
}

impl Brooks {
    pub fn word(&self) -> &FreeWord {
        &self.w
    }
}

/// Panics on the empty word, which counts nothing.
pub fn brooks_qm(w: &FreeWord) -> Brooks {
    assert!(!w.is_empty(), "Brooks quasi-morphism of the empty word");
    let warning = w.is_proper_power().then_some("word is a proper power");
    Brooks {
        w: w.clone(),
        w_inv: w.inverse(),
        warning,
    }
}

impl QuasiMorphism<FreeWord> for Brooks {
    fn eval(&self, g: &FreeWord) -> f64 {
        count_occurrences(g.letters(), self.w.letters()) as f64
            - count_occurrences(g.letters(), self.w_inv.letters()) as f64
    }

    fn kind(&self) -> QmKind {
        QmKind::Brooks
    }

    fn homogenized(&self, g: &FreeWord) -> Option<f64> {
        let core = g.cyclic_reduce().0;
        Some(
            count_cyclic(core.letters(), self.w.letters()) as f64
                - count_cyclic(core.letters(), self.w_inv.letters()) as f64,
        )
    }
}

/// `t`-exponent sum on BS(m,n), a homomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct BsExponentSum;

impl QuasiMorphism<BsElement> for BsExponentSum {
    fn eval(&self, g: &BsElement) -> f64 {
        g.t_exponent_sum() as f64
    }
    fn kind(&self) -> QmKind {
        QmKind::ExponentSum
    }
    fn defect_bound(&self) -> Option<f64> {
        Some(0.0)
    }
    fn homogenized(&self, g: &BsElement) -> Option<f64> {
        Some(self.eval(g))
    }
}

/// Exponent sum of one free generator, a homomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeExponentSum {
    pub index: u32,
}

impl QuasiMorphism<FreeWord> for FreeExponentSum {
    fn eval(&self, g: &FreeWord) -> f64 {
        g.exponent_sum(self.index) as f64
    }
    fn kind(&self) -> QmKind {
        QmKind::ExponentSum
    }
    fn defect_bound(&self) -> Option<f64> {
        Some(0.0)
    }
    fn homogenized(&self, g: &FreeWord) -> Option<f64> {
        Some(self.eval(g))
    }
}

/// The zero quasi-morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Zero;

impl<E> QuasiMorphism<E> for Zero {
    fn eval(&self, _g: &E) -> f64 {
        0.0
    }
    fn kind(&self) -> QmKind {
        QmKind::Custom
    }
    fn defect_bound(&self) -> Option<f64> {
        Some(0.0)
    }
    fn homogenized(&self, _g: &E) -> Option<f64> {
        Some(0.0)
    }
}

/// `Σ cᵢ qᵢ`.
pub struct Linear<E> {
    pub terms: Vec<(f64, Box<dyn QuasiMorphism<E>>)>,
}

impl<E> QuasiMorphism<E> for Linear<E> {
    fn eval(&self, g: &E) -> f64 {
        self.terms.iter().map(|(c, q)| c * q.eval(g)).sum()
    }
    fn kind(&self) -> QmKind {
        QmKind::LinearCombination
    }
    fn defect_bound(&self) -> Option<f64> {
        self.terms
            .iter()
            .map(|(c, q)| q.defect_bound().map(|d| libm::fabs(*c) * d))
            .sum()
    }
    fn homogenized(&self, g: &E) -> Option<f64> {
        self.terms
            .iter()
            .map(|(c, q)| q.homogenized(g).map(|v| c * v))
            .sum()
    }
}

/// A closure with an optional analytic defect bound.
pub struct Custom<F> {
    pub f: F,
    pub bound: Option<f64>,
}

impl<E, F: Fn(&E) -> f64> QuasiMorphism<E> for Custom<F> {
    fn eval(&self, g: &E) -> f64 {
        (self.f)(g)
    }
    fn kind(&self) -> QmKind {
        QmKind::Custom
    }
    fn defect_bound(&self) -> Option<f64> {
        self.bound
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DefectReport<E> {
    /// A lower bound on the defect.
    pub defect: f64,
    pub witness: Option<(E, E)>,
    pub pairs: u64,
}

/// `max |q(gh) − q(g) − q(h)|` over all ordered pairs from `elements`.
pub fn defect_empirical<G: Group, Q: QuasiMorphism<G::Element> + ?Sized>(
    group: &G,
    q: &Q,
    elements: &[G::Element],
) -> DefectReport<G::Element> {
    let values: Vec<f64> = elements.iter().map(|g| q.eval(g)).collect();
    let mut best = 0.0f64;
    let mut witness = None;
    let mut pairs = 0;
    for (i, g) in elements.iter().enumerate() {
        for (j, h) in elements.iter().enumerate() {
            pairs += 1;
            let d = libm::fabs(q.eval(&group.multiply(g, h)) - values[i] - values[j]);
            if d > best {
                best = d;
                witness = Some((g.clone(), h.clone()));
            }
        }
    }
    DefectReport {
        defect: best,
        witness,
        pairs,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Homogenized {
    pub value: f64,
    pub error_bound: f64,
    pub n: u64,
}

/// `q(gⁿ)/n` with error `D/n`.
pub fn homogenize<G: Group, Q: QuasiMorphism<G::Element> + ?Sized>(
    group: &G,
    q: &Q,
    g: &G::Element,
    n: u64,
    defect: f64,
) -> Result<Homogenized, QmError> {
    if n == 0 {
        return Err(QmError::ZeroPower);
    }
    let gn = group.pow(g, n as i64);
    Ok(Homogenized {
        value: q.eval(&gn) / n as f64,
        error_bound: defect / n as f64,
        n,
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SubordinationFit<E> {
    /// Certificate constant: `max(sup_{ℓ>0} |q|/ℓ, max_{ℓ=0} |q|)`.
    pub m: f64,
    /// Minimal `M` with `|q| ≤ Mℓ + M` on the domain, `max |q|/(ℓ+1)`.
    pub affine: f64,
    pub slope: f64,
    pub witness: Option<E>,
    pub checked: usize,
}

impl<E> SubordinationFit<E> {
    /// Whether `|q| ≤ Mℓ + M` holds for one evaluation.
    pub fn holds(m: f64, q: f64, l: f64) -> bool {
        libm::fabs(q) <= m * l + m + crate::ABS_TOL * (1.0 + libm::fabs(q))
    }
}

/// Fits `|q(g)| ≤ M·ℓ(g) + M` over `elements`.
pub fn subordination_fit<G: Group, Q, L>(
    group: &G,
    q: &Q,
    len: &L,
    elements: &[G::Element],
) -> Result<SubordinationFit<G::Element>, QmError>
where
    Q: QuasiMorphism<G::Element> + ?Sized,
    L: Length<G::Element> + ?Sized,
{
    if elements.is_empty() {
        return Err(QmError::EmptyDomain);
    }
    let mut affine = 0.0f64;
    let mut slope = 0.0f64;
    let mut flat = 0.0f64;
    let mut witness = None;
    let mut best_m = -1.0f64;
    for g in elements {
        let l = len
            .length(g)
            .ok_or_else(|| QmError::DomainMiss(group.render(g)))?;
        let v = libm::fabs(q.eval(g));
        affine = affine.max(v / (l + 1.0));
        let need = if l > crate::ABS_TOL {
            slope = slope.max(v / l);
            v / l
        } else {
            flat = flat.max(v);
            v
        };
        if need > best_m {
            best_m = need;
            witness = Some(g.clone());
        }
    }
    Ok(SubordinationFit {
        m: slope.max(flat),
        affine,
        slope,
        witness,
        checked: elements.len(),
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Inequality {
    pub element: String,
    pub q: f64,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnisotropyCertificate {
    pub witness: String,
    /// `q̃(witness)`.
    pub value: f64,
    /// Zero when `value` is exact.
    pub value_error: f64,
    pub m: f64,
    pub affine: f64,
    pub radius: usize,
    pub kind: QmKind,
    /// Every `(g, q(g), ℓ(g))` used by the fit, re-checkable without search.
    pub inequalities: Vec<Inequality>,
    pub statement: String,
}

impl AnisotropyCertificate {
    /// Recomputes `|q| ≤ Mℓ + M` on the recorded values and the nonzero value.
    pub fn check_recorded(&self) -> bool {
        libm::fabs(self.value) > self.value_error
            && self
                .inequalities
                .iter()
                .all(|i| SubordinationFit::<()>::holds(self.m, i.q, i.length))
    }
}

/// Certificate that `g` witnesses anisotropy: `q̃(g) ≠ 0` and `q` is
/// subordinate to `ℓ` on the ball.
///
/// `homogenization` is used only when `q` has no exact homogenization: then
/// `q̃(g)` is estimated as `q(gⁿ)/n` with error `D/n`, `D` the analytic
/// bound or, failing that, the empirical defect on `ball`.
#[allow(clippy::too_many_arguments)]
pub fn anisotropy_certificate<G: Group, Q, L>(
    group: &G,
    q: &Q,
    len: &L,
    g: &G::Element,
    ball: &[G::Element],
    radius: usize,
    homogenization: u64,
    m_cap: f64,
) -> Result<AnisotropyCertificate, QmError>
where
    Q: QuasiMorphism<G::Element> + ?Sized,
    L: Length<G::Element> + ?Sized,
{
    let (value, value_error) = match q.homogenized(g) {
        Some(v) => (v, 0.0),
        None => {
            let d = q
                .defect_bound()
                .unwrap_or_else(|| defect_empirical(group, q, ball).defect);
            let h = homogenize(group, q, g, homogenization, d)?;
            (h.value, h.error_bound)
        }
    };
    if !(libm::fabs(value) > value_error + crate::ABS_TOL) {
        return Err(QmError::ZeroValue {
            value,
            error: value_error,
        });
    }
    let fit = subordination_fit(group, q, len, ball)?;
    if fit.m > m_cap {
        return Err(QmError::NotSubordinate {
            m: fit.m,
            cap: m_cap,
        });
    }
    let inequalities = ball
        .iter()
        .map(|e| Inequality {
            element: group.render(e),
            q: q.eval(e),
            length: len.length(e).unwrap_or(f64::NAN),
        })
        .collect();
    let statement = alloc::format!(
        "homogenized value {value} at {} is nonzero and |q| <= {}*l + {} on the radius-{radius} ball: \
         the witness is loxodromic and not conjugate into its inverse's direction, so the action is not weakly isotropic",
        group.render(g),
        fit.m,
        fit.m
    );
    Ok(AnisotropyCertificate {
        witness: group.render(g),
        value,
        value_error,
        m: fit.m,
        affine: fit.affine,
        radius,
        kind: q.kind(),
        inequalities,
        statement,
    })
}

/// Heuristic diagnostic: `max |q([g,h])|` over pairs of `elements`.
pub fn commutator_scan<G: Group, Q: QuasiMorphism<G::Element> + ?Sized>(
    group: &G,
    q: &Q,
    elements: &[G::Element],
) -> (f64, Option<(G::Element, G::Element)>) {
    let mut best = 0.0f64;
    let mut witness = None;
    for g in elements {
        for h in elements {
            let c = group.multiply(
                &group.multiply(g, h),
                &group.multiply(&group.invert(g), &group.invert(h)),
            );
            let v = libm::fabs(q.eval(&c));
            if v > best {
                best = v;
                witness = Some((g.clone(), h.clone()));
            }
        }
    }
    (best, witness)
}

/// `t`-syllable length on BS(m,n): displacement on the Bass-Serre tree.
pub fn bs_t_length(g: &BsElement) -> Option<f64> {
    Some(g.t_length() as f64)
}
