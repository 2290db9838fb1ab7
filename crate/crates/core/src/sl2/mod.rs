//! Exact `SL2` over `ℚ(√d)` acting on the upper half-plane through a real
//! embedding.
//!
//! Classification compares `tr² − 4` with zero inside the field, so it never
//! depends on rounding. Distances and translation lengths are transcendental;
//! they are evaluated as `2·asinh(√u)` from an exact field element `u`, which
//! stays well conditioned near the parabolic boundary, and returned as
//! outward-rounded intervals.

mod interval;
mod mat;
mod quad;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use thiserror::Error;

pub use interval::{next_down, next_up, Interval, PAD_ULPS};
pub use mat::{Mat2, Sl2Group};
pub use quad::{is_square_free, Quad, Rational, RealEmbedding, Sign};

/// Default tolerance for transcendental outputs.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Sl2Error {
    #[error("{d} is not a square-free integer greater than 1")]
    NotSquareFree { d: i64 },
    #[error("entries from Q(sqrt{left}) and Q(sqrt{right})")]
    FieldMismatch { left: i64, right: i64 },
    #[error("determinant is {0}, not 1")]
    Determinant(String),
    #[error("matrix is {0}, not loxodromic")]
    NotLoxodromic(Class),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no enclosure reached at {bits} bits")]
    Precision { bits: u32 },
    #[error("ball budget of {cap} matrices exceeded")]
    BudgetExceeded { cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Class {
    Elliptic,
    Parabolic,
    Loxodromic,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Elliptic => "elliptic",
            Class::Parabolic => "parabolic",
            Class::Loxodromic => "loxodromic",
        })
    }
}

fn discriminant(a: &Mat2) -> Quad {
    let t = a.trace();
    t.mul(&t)
        .sub(&Quad::int(4, a.field()).expect("validated field"))
}

/// Sign of `tr² − 4` under `e`; the identity counts as parabolic.
pub fn classify(a: &Mat2, e: RealEmbedding) -> Class {
    match discriminant(a).sign_under(e.sign) {
        Ordering::Less => Class::Elliptic,
        Ordering::Equal => Class::Parabolic,
        Ordering::Greater => Class::Loxodromic,
    }
}

/// `[[x, x² − 1], [1, x]]`.
pub fn lemma_emb_matrix(x: &Quad) -> Result<Mat2, Sl2Error> {
    let one = Quad::int(1, x.d())?;
    Mat2::new(x.clone(), x.mul(x).sub(&one), one, x.clone())
}

/// `2·asinh(√u)` for an exact `u ≥ 0`, which is `2·acosh(√(1+u))`.
fn two_asinh_sqrt(u: &Quad, e: RealEmbedding, tol: f64) -> Result<Interval, Sl2Error> {
    // asinh and sqrt have derivative at most 1/(2√u) near 0; tighten the input
    let iv = u.interval(e, tol * tol.min(1e-3))?;
    Ok(iv.sqrt().asinh().scale(2.0))
}

/// `2·acosh(|tr|/2)`, the displacement of `A` along its axis.
pub fn translation_length_h2(a: &Mat2, e: RealEmbedding, tol: f64) -> Result<Interval, Sl2Error> {
    match classify(a, e) {
        Class::Loxodromic => {}
        c => return Err(Sl2Error::NotLoxodromic(c)),
    }
    // (tr/2)² − 1 = (tr² − 4)/4
    let u = discriminant(a).scale(&Rational::new(1.into(), 4.into()));
    two_asinh_sqrt(&u, e, tol)
}

/// `d(i, A·i)` from the Möbius image of `i`.
pub fn orbit_distance_h2(a: &Mat2, e: RealEmbedding, tol: f64) -> Result<Interval, Sl2Error> {
    let (x, y) = a.mobius_i();
    let f = a.field();
    let one = Quad::int(1, f)?;
    // cosh d − 1 = |A·i − i|² / (2y) = u; d = 2·asinh(√(u/2))
    let ym = y.sub(&one);
    let num = x.mul(&x).add(&ym.mul(&ym));
    let u = num
        .div(&y.scale(&Rational::from_integer(2.into())))
        .expect("Im(A·i) > 0");
    if u.is_zero() {
        return Ok(Interval::point(0.0));
    }
    two_asinh_sqrt(&u.scale(&Rational::new(1.into(), 2.into())), e, tol)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumRow {
    pub word: String,
    pub trace: String,
    pub class1: Class,
    pub class2: Class,
    pub tau1: Option<f64>,
    pub tau2: Option<f64>,
}

impl SpectrumRow {
    /// One embedding sees a loxodromic and the other does not.
    pub fn is_witness(&self) -> bool {
        (self.class1 == Class::Loxodromic) != (self.class2 == Class::Loxodromic)
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumReport {
    pub rows: Vec<SpectrumRow>,
    /// Indices into `rows` of elements whose class differs across embeddings.
    pub witnesses: Vec<usize>,
}

fn letter(i: usize, inverse: bool) -> char {
    let c = (b'a' + (i % 26) as u8) as char;
    if inverse {
        c.to_ascii_uppercase()
    } else {
        c
    }
}

/// Classes and translation lengths under two embeddings over the word ball.
///
/// Generator `i` is written as the `i`-th lowercase letter and its inverse
/// in uppercase; each matrix appears once, under its first BFS word.
pub fn embedding_spectrum_compare(
    generators: &[Mat2],
    e1: RealEmbedding,
    e2: RealEmbedding,
    radius: usize,
    cap: usize,
) -> Result<SpectrumReport, Sl2Error> {
    let field = generators.first().map(Mat2::field).unwrap_or(2);
    let mut steps = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        steps.push((letter(i, false), g.clone()));
        steps.push((letter(i, true), g.inverse()));
    }
    let mut seen = BTreeSet::new();
    let id = Mat2::identity(field)?;
    seen.insert(id.clone());
    let mut layer = alloc::vec![(String::new(), id)];
    let mut all = layer.clone();
    for _ in 0..radius {
        let mut next = Vec::new();
        for (w, m) in &layer {
            for (c, s) in &steps {
                let p = m.mul(s);
                if seen.insert(p.clone()) {
                    let mut w2 = w.clone();
                    w2.push(*c);
                    next.push((w2, p));
                    if seen.len() > cap {
                        return Err(Sl2Error::BudgetExceeded { cap });
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    let tau = |m: &Mat2, e| -> Result<Option<f64>, Sl2Error> {
        match translation_length_h2(m, e, DEFAULT_TOL) {
            Ok(iv) => Ok(Some(iv.mid())),
            Err(Sl2Error::NotLoxodromic(_)) => Ok(None),
            Err(err) => Err(err),
        }
    };
    let mut rows = Vec::with_capacity(all.len());
    let mut witnesses = Vec::new();
    for (w, m) in all {
        let row = SpectrumRow {
            word: if w.is_empty() { String::from("1") } else { w },
            trace: alloc::format!("{}", m.trace()),
            class1: classify(&m, e1),
            class2: classify(&m, e2),
            tau1: tau(&m, e1)?,
            tau2: tau(&m, e2)?,
        };
        if row.is_witness() {
            witnesses.push(rows.len());
        }
        rows.push(row);
    }
    Ok(SpectrumReport { rows, witnesses })
}

/// Experimental: the split matrix with its parameter assigned to a real
/// number instead of an algebraic one.
///
/// Nothing certifies that the assigned value behaves like a transcendental,
/// and the class is decided in floating point: `None` when `|tr² − 4|` is
/// within `tol`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AssignedReport {
    pub x: f64,
    pub trace: f64,
    pub class: Option<Class>,
    pub tau: Option<f64>,
}

pub fn assigned_split_matrix(x: f64, tol: f64) -> AssignedReport {
    let trace = 2.0 * x;
    let disc = trace * trace - 4.0;
    let class = if libm::fabs(disc) <= tol {
        None
    } else if disc < 0.0 {
        Some(Class::Elliptic)
    } else {
        Some(Class::Loxodromic)
    };
    let tau = (class == Some(Class::Loxodromic)).then(|| 2.0 * libm::asinh(libm::sqrt(disc / 4.0)));
    AssignedReport {
        x,
        trace,
        class,
        tau,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::enumerate_ball;
    use crate::metric::orbit_pseudo_length;

    // 30-digit values from an independent arbitrary-precision evaluation
    const TWO_ACOSH_1_5: f64 = 1.9248473002384137899910356537;
    const ACOSH_1_5: f64 = 0.962423650119206894995517826849;
    const TWO_ACOSH_1_PLUS_SQRT2: f64 = 3.05714183896199632254491236959;
    const TAU_TRACE_7: f64 = 3.84969460047682757998207130739;
    const TAU_TRACE_18: f64 = 5.77454190071524136997310696109;
    const TWO_ACOSH_1_PLUS_HALF_MICRO: f64 = 0.00199999991666667604166527141561;

    fn q(s: &str) -> Quad {
        Quad::parse(s, 2).unwrap()
    }

    fn m(e: [i64; 4]) -> Mat2 {
        Mat2::from_ints(2, e).unwrap()
    }

    const P: RealEmbedding = RealEmbedding::PLUS;
    const N: RealEmbedding = RealEmbedding::MINUS;

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&m([1, 0, 0, 1]), P), Class::Parabolic);
        assert_eq!(classify(&m([2, 1, 1, 1]), P), Class::Loxodromic);
        assert_eq!(classify(&m([0, -1, 1, 0]), P), Class::Elliptic);
        assert_eq!(classify(&m([1, 1, 0, 1]), N), Class::Parabolic);
        let x = q("sqrt2-1");
        let a = lemma_emb_matrix(&x).unwrap();
        assert_eq!(a.trace(), q("2sqrt2-2"));
        assert_eq!(classify(&a, P), Class::Elliptic);
        assert_eq!(classify(&a, N), Class::Loxodromic);
        assert_eq!(
            classify(&lemma_emb_matrix(&q("0")).unwrap(), P),
            Class::Elliptic
        );
        assert_eq!(
            classify(&lemma_emb_matrix(&q("1")).unwrap(), P),
            Class::Parabolic
        );
    }

    #[test]
    fn classification_is_conjugation_invariant() {
        let mats = [
            m([2, 1, 1, 1]),
            m([0, -1, 1, 0]),
            m([1, 3, 0, 1]),
            lemma_emb_matrix(&q("sqrt2-1")).unwrap(),
        ];
        let conj = [
            m([1, 1, 0, 1]),
            m([3, 2, 1, 1]),
            lemma_emb_matrix(&q("sqrt2")).unwrap(),
        ];
        for a in &mats {
            for c in &conj {
                let b = c.mul(a).mul(&c.inverse());
                for e in [P, N] {
                    assert_eq!(classify(&b, e), classify(a, e));
                }
            }
        }
    }

    #[test]
    fn translation_lengths() {
        let a = m([2, 1, 1, 1]);
        let t = translation_length_h2(&a, P, DEFAULT_TOL).unwrap();
        assert!(
            t.contains(TWO_ACOSH_1_5) || (t.mid() - TWO_ACOSH_1_5).abs() < 1e-15,
            "{t:?}"
        );
        assert!(t.width() <= 1e-12);
        assert!(
            (translation_length_h2(&a.pow(2), P, DEFAULT_TOL)
                .unwrap()
                .mid()
                - TAU_TRACE_7)
                .abs()
                < 1e-12
        );
        assert!(
            (translation_length_h2(&a.pow(3), P, DEFAULT_TOL)
                .unwrap()
                .mid()
                - TAU_TRACE_18)
                .abs()
                < 1e-12
        );
        for k in 1..=4 {
            let tk = translation_length_h2(&a.pow(k), P, DEFAULT_TOL)
                .unwrap()
                .mid();
            assert!((tk - k as f64 * t.mid()).abs() < 1e-9);
        }
        let x = lemma_emb_matrix(&q("sqrt2-1")).unwrap();
        let t = translation_length_h2(&x, N, DEFAULT_TOL).unwrap();
        assert!((t.mid() - TWO_ACOSH_1_PLUS_SQRT2).abs() < 1e-12);
        assert_eq!(
            translation_length_h2(&x, P, DEFAULT_TOL),
            Err(Sl2Error::NotLoxodromic(Class::Elliptic))
        );
        let t2 = translation_length_h2(&x.pow(2), N, DEFAULT_TOL).unwrap();
        assert!((t2.mid() - 2.0 * t.mid()).abs() < 1e-9);
    }

    #[test]
    fn translation_length_near_the_boundary() {
        // trace 2 + 10⁻⁶ from a rational matrix [[1+ε, 1], [ε, 1]] with det 1
        let eps = Rational::new(1.into(), 1_000_000.into());
        let one = Rational::from_integer(1.into());
        let a = Mat2::new(
            Quad::rational(&one + &eps, 2).unwrap(),
            Quad::rational(one.clone(), 2).unwrap(),
            Quad::rational(eps, 2).unwrap(),
            Quad::rational(one, 2).unwrap(),
        )
        .unwrap();
        let t = translation_length_h2(&a, P, DEFAULT_TOL).unwrap();
        assert!(
            (t.mid() - TWO_ACOSH_1_PLUS_HALF_MICRO).abs() < 1e-15,
            "{t:?}"
        );
    }

    /// Oracle: `2·cosh d(i, A·i) = a² + b² + c² + d²` for real entries.
    fn frobenius_distance(a: &Mat2, e: RealEmbedding) -> f64 {
        let n: f64 = a
            .entries()
            .iter()
            .map(|x| {
                let v = x.interval(e, 1e-15).unwrap().mid();
                v * v
            })
            .sum();
        libm::acosh(n / 2.0)
    }

    #[test]
    fn orbit_distances() {
        assert_eq!(
            orbit_distance_h2(&m([1, 0, 0, 1]), P, DEFAULT_TOL)
                .unwrap()
                .mid(),
            0.0
        );
        let d = orbit_distance_h2(&m([1, 1, 0, 1]), P, DEFAULT_TOL).unwrap();
        assert!((d.mid() - ACOSH_1_5).abs() < 1e-15);
        let mats = [
            m([2, 1, 1, 1]),
            m([5, 2, 2, 1]),
            lemma_emb_matrix(&q("sqrt2-1")).unwrap(),
            lemma_emb_matrix(&q("3/2+sqrt2")).unwrap(),
        ];
        for a in &mats {
            for e in [P, N] {
                let d = orbit_distance_h2(a, e, DEFAULT_TOL).unwrap().mid();
                assert!((d - frobenius_distance(a, e)).abs() < 1e-9, "{a} {e:?}");
                if let Ok(t) = translation_length_h2(a, e, DEFAULT_TOL) {
                    assert!(d >= t.lo - 1e-12);
                }
            }
        }
    }

    #[test]
    fn orbit_distance_is_a_pseudo_length() {
        let g = Sl2Group::new(2).unwrap();
        let gens = [m([1, 1, 0, 1]), lemma_emb_matrix(&q("sqrt2-1")).unwrap()];
        let ball = enumerate_ball(&g, &gens, 2, 1 << 12).unwrap();
        for e in [P, N] {
            let pairs = ball.elements().iter().map(|a| {
                (
                    a.clone(),
                    orbit_distance_h2(a, e, DEFAULT_TOL).unwrap().mid(),
                )
            });
            let l = orbit_pseudo_length(&g, pairs).unwrap();
            assert_eq!(l.len(), ball.len());
        }
    }

    #[test]
    fn spectrum_comparison() {
        let a = lemma_emb_matrix(&q("sqrt2-1")).unwrap();
        let same =
            embedding_spectrum_compare(&[a.clone(), m([1, 1, 0, 1])], P, P, 2, 1 << 12).unwrap();
        assert!(same.witnesses.is_empty());
        assert!(same.rows.iter().all(|r| r.tau1 == r.tau2));
        let split = embedding_spectrum_compare(&[a.clone()], P, N, 1, 1 << 12).unwrap();
        assert_eq!(split.rows[0].word, "1");
        let w = &split.rows[split.witnesses[0]];
        assert_eq!(
            (w.word.as_str(), w.class1, w.class2),
            ("a", Class::Elliptic, Class::Loxodromic)
        );
        let ints =
            embedding_spectrum_compare(&[m([2, 1, 1, 1]), m([1, 2, 0, 1])], P, N, 2, 1 << 12)
                .unwrap();
        assert!(ints.witnesses.is_empty());
        assert!(embedding_spectrum_compare(&[m([2, 1, 1, 1])], P, N, 6, 5).is_err());
    }

    #[test]
    fn assigned_mode() {
        let r = assigned_split_matrix(core::f64::consts::SQRT_2 - 1.0, 1e-12);
        assert_eq!(r.class, Some(Class::Elliptic));
        let r = assigned_split_matrix(-core::f64::consts::SQRT_2 - 1.0, 1e-12);
        assert_eq!(r.class, Some(Class::Loxodromic));
        assert!((r.tau.unwrap() - TWO_ACOSH_1_PLUS_SQRT2).abs() < 1e-12);
        assert_eq!(assigned_split_matrix(1.0, 1e-12).class, None);
    }
}
