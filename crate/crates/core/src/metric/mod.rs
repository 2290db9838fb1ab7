//! Metrics on groups and finite sets.
//!
//! Group elements are measured through a [`Length`], and the left-invariant
//! distance is `d(x, y) = ℓ(x⁻¹y)`.

mod cone;
mod delta;
mod paths;
mod pseudo;
mod space;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use crate::group::Group;

pub use cone::{cone_off, cone_off_ball, distances_from, ConeOff};
pub use delta::{
    four_point_defect, four_point_delta, quadruple_count, sample_quadruples, scan_quadruples,
    DeltaEstimate, DeltaMode, DeltaScan, DEFAULT_QUADRUPLE_CAP,
};
pub use paths::{hausdorff_distance, path_length, quasi_geodesic_additive};
pub use pseudo::{
    compare_pseudo_lengths, log_transform, orbit_pseudo_length, Axiom, ComparisonReport, Direction,
    PseudoLength,
};
pub use space::{FiniteMetricSpace, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("distance matrix is not square")]
    NotSquare,
    #[error("d({i},{i}) is not zero")]
    NonZeroDiagonal { i: usize },
    #[error("d({i},{j}) is negative")]
    Negative { i: usize, j: usize },
    #[error("d({i},{j}) != d({j},{i})")]
    Asymmetric { i: usize, j: usize },
    #[error("triangle inequality fails for ({i},{j},{k})")]
    Triangle { i: usize, j: usize, k: usize },
    #[error("value outside the materialized domain: {0}")]
    DomainMiss(String),
    #[error("pseudo-length axiom '{axiom}' violated: {detail}")]
    AxiomViolation { axiom: Axiom, detail: String },
    #[error("empty domain")]
    EmptyDomain,
    #[error("quadruple budget exceeded: {needed} > {cap}")]
    BudgetExceeded { cap: u64, needed: u64 },
}

/// Anything that assigns a length to (some) group elements.
pub trait Length<E> {
    fn length(&self, g: &E) -> Option<f64>;
}

impl<E, F: Fn(&E) -> Option<f64>> Length<E> for F {
    fn length(&self, g: &E) -> Option<f64> {
        self(g)
    }
}

impl<E: Ord> Length<E> for BTreeMap<E, f64> {
    fn length(&self, g: &E) -> Option<f64> {
        self.get(g).copied()
    }
}

/// `d(x, y) = ℓ(x⁻¹ y)`.
pub fn element_distance<G: Group, L: Length<G::Element> + ?Sized>(
    group: &G,
    len: &L,
    x: &G::Element,
    y: &G::Element,
) -> Result<f64, MetricError> {
    let g = group.multiply(&group.invert(x), y);
    len.length(&g)
        .ok_or_else(|| MetricError::DomainMiss(group.render(&g)))
}

/// Gromov product `(x,y)_z` of group elements under a left-invariant length.
pub fn gromov_product<G: Group, L: Length<G::Element> + ?Sized>(
    group: &G,
    len: &L,
    x: &G::Element,
    y: &G::Element,
    z: &G::Element,
) -> Result<f64, MetricError> {
    let dxz = element_distance(group, len, x, z)?;
    let dyz = element_distance(group, len, y, z)?;
    let dxy = element_distance(group, len, x, y)?;
    Ok(0.5 * (dxz + dyz - dxy))
}

/// Distance matrix of `points` under a left-invariant length.
pub fn metric_space_from<G: Group, L: Length<G::Element> + ?Sized>(
    group: &G,
    points: &[G::Element],
    len: &L,
) -> Result<FiniteMetricSpace<f64>, MetricError> {
    let n = points.len();
    let mut dist = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = element_distance(group, len, &points[i], &points[j])?;
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    Ok(FiniteMetricSpace::from_fn_unchecked(n, |i, j| {
        dist[i * n + j]
    }))
}

/// Exact word length in a free group with respect to its standard basis.
pub fn free_word_length(g: &crate::group::FreeWord) -> Option<f64> {
    Some(g.len() as f64)
}

pub(crate) fn describe<E: core::fmt::Debug>(items: &[&E]) -> String {
    let parts: Vec<String> = items.iter().map(|e| alloc::format!("{e:?}")).collect();
    parts.join(", ")
}
