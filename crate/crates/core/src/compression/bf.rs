use alloc::vec::Vec;

use super::CompressionError;
use crate::group::{FreeGroup, FreeWord, Group};
use crate::lox::{build_quasi_axis, QuasiAxis};
use crate::metric::{
    element_distance, free_word_length, quasi_geodesic_additive, FiniteMetricSpace, Length,
};

/// Members `g_n = f₁·f₂^{cⁿ}` for `n = 1..=count`, each with a quasi-axis
/// through the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct BfFamily {
    pub f1: FreeWord,
    pub f2: FreeWord,
    pub c: u64,
    pub members: Vec<FreeWord>,
    pub axes: Vec<QuasiAxis<FreeWord>>,
    /// Multiplicative quasi-geodesic constant used for the axes.
    pub k: f64,
    /// Smallest additive constant making every materialized axis a `(k, l)`-quasi-geodesic.
    pub l: f64,
}

impl BfFamily {
    /// Cyclic cores of the members, usable as family words of a compressed set.
    pub fn family_words(&self) -> Vec<FreeWord> {
        self.members.iter().map(|g| g.cyclic_reduce().0).collect()
    }
}

pub fn make_bf_family(
    f1: &FreeWord,
    f2: &FreeWord,
    c: u64,
    count: usize,
    window: usize,
) -> Result<BfFamily, CompressionError> {
    let group = FreeGroup::new(f1.min_rank().max(f2.min_rank()).max(1));
    let mut members = Vec::with_capacity(count);
    let mut axes = Vec::with_capacity(count);
    let mut l = 0.0f64;
    for n in 1..=count as u32 {
        let e = c
            .checked_pow(n)
            .and_then(|e| i64::try_from(e).ok())
            .ok_or(CompressionError::Overflow)?;
        let g = f1.mul(&f2.pow(e));
        let gamma: Vec<FreeWord> = g
            .letters()
            .iter()
            .map(|&x| FreeWord::from_letters([x]))
            .collect();
        let axis =
            build_quasi_axis(&group, &g, &gamma, window, &free_word_length).map_err(|_| {
                CompressionError::InvalidFamily {
                    index: n as usize - 1,
                    reason: "member is trivial",
                }
            })?;
        let pts = axis.points();
        let space = FiniteMetricSpace::from_fn_unchecked(pts.len(), |i, j| {
            pts[i].inverse().mul(&pts[j]).len() as f64
        });
        let idx: Vec<usize> = (0..pts.len()).collect();
        l = l.max(quasi_geodesic_additive(&space, &idx, 1.0));
        members.push(g);
        axes.push(axis);
    }
    Ok(BfFamily {
        f1: f1.clone(),
        f2: f2.clone(),
        c,
        members,
        axes,
        k: 1.0,
        l,
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OverlapReport<E> {
    /// `max_a diam{p ∈ P : d(p, a·Q) ≤ r}`.
    pub diameter: f64,
    /// First translate attaining the maximum.
    pub translate: Option<E>,
}

/// Largest diameter of the part of `axis_i` within `r` of a translate of `axis_j`.
pub fn overlap_scan<G: Group, L: Length<G::Element> + ?Sized>(
    group: &G,
    len: &L,
    axis_i: &[G::Element],
    axis_j: &[G::Element],
    r: f64,
    translates: &[G::Element],
) -> Result<OverlapReport<G::Element>, CompressionError> {
    let mut best = OverlapReport {
        diameter: 0.0,
        translate: None,
    };
    for a in translates {
        let moved: Vec<G::Element> = axis_j.iter().map(|q| group.multiply(a, q)).collect();
        let mut close = Vec::new();
        for p in axis_i {
            let mut near = false;
            for q in &moved {
                if element_distance(group, len, p, q)? <= r + crate::ABS_TOL {
                    near = true;
                    break;
                }
            }
            if near {
                close.push(p);
            }
        }
        let mut diam = 0.0f64;
        for (x, p) in close.iter().enumerate() {
            for q in &close[x + 1..] {
                diam = diam.max(element_distance(group, len, p, q)?);
            }
        }
        if best.translate.is_none() || diam > best.diameter {
            best = OverlapReport {
                diameter: diam,
                translate: Some(a.clone()),
            };
        }
    }
    Ok(best)
}

/// `Nᵢ = ⌈max_{j≠i} overlap(i, j)⌉ + margin`, the finite-scale stand-in for
/// the supremum over all translates.
pub fn overlap_surrogates(
    family: &BfFamily,
    r: f64,
    translates: &[FreeWord],
    margin: u64,
) -> Result<Vec<u64>, CompressionError> {
    let group = FreeGroup::new(family.f1.min_rank().max(family.f2.min_rank()).max(1));
    let pts: Vec<Vec<FreeWord>> = family.axes.iter().map(|a| a.points()).collect();
    let mut out = Vec::with_capacity(pts.len());
    for i in 0..pts.len() {
        let mut m = 0.0f64;
        for j in 0..pts.len() {
            if i != j {
                m = m.max(
                    overlap_scan(&group, &free_word_length, &pts[i], &pts[j], r, translates)?
                        .diameter,
                );
            }
        }
        out.push(libm::ceil(m) as u64 + margin);
    }
    Ok(out)
}
