//! The injective hull `E(X)` of a finite metric space, as extremal functions.
//!
//! A function `f: X → ℝ` is admissible when `f(x) + f(y) ≥ d(x, y)` for all
//! pairs and extremal when moreover `f(x) = max_y (d(x, y) − f(y))`. Writing
//! `q(f)` for the right-hand side, admissibility gives `q(f) ≤ f`, and both
//! operators below stay admissible while moving down.

use alloc::vec::Vec;
use thiserror::Error;

use crate::metric::{
    four_point_delta, DeltaEstimate, DeltaMode, FiniteMetricSpace, MetricError, Scalar,
};

/// Default stopping slack and iteration cap of [`project_to_hull`].
pub const DEFAULT_SLACK: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TightSpanError {
    #[error("function has {got} values for a {expected}-point space")]
    LengthMismatch { expected: usize, got: usize },
    #[error("not admissible: f({i}) + f({j}) falls short of d by {shortfall}")]
    NotAdmissible { i: usize, j: usize, shortfall: f64 },
    #[error("not extremal: slack {slack} at sample {index}")]
    NotExtremal { index: usize, slack: f64 },
    #[error("no convergence after {iterations} iterations; slack {slack}")]
    NoConvergence { iterations: usize, slack: f64 },
    #[error("map is not a permutation of the points")]
    NotPermutation,
    #[error("map changes d({i}, {j})")]
    NotIsometry { i: usize, j: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn check_len<T>(f: &[T], n: usize) -> Result<(), TightSpanError> {
    if f.len() != n {
        return Err(TightSpanError::LengthMismatch {
            expected: n,
            got: f.len(),
        });
    }
    Ok(())
}

/// `ι(x) = d(x, ·)`.
pub fn kuratowski_embed<T: Scalar>(space: &FiniteMetricSpace<T>, x: usize) -> Vec<T> {
    space.row(x).to_vec()
}

/// `sup_x |f(x) − g(x)|`.
pub fn sup_distance<T: Scalar>(f: &[T], g: &[T]) -> T {
    f.iter()
        .zip(g)
        .fold(T::zero(), |m, (a, b)| m.max_of((*a - *b).abs()))
}

/// `q(f)(x) = max_y (d(x, y) − f(y))`.
pub fn hull_operator<T: Scalar>(space: &FiniteMetricSpace<T>, f: &[T]) -> Vec<T> {
    (0..space.size())
        .map(|x| {
            let row = space.row(x);
            (1..row.len()).fold(row[0] - f[0], |m, y| m.max_of(row[y] - f[y]))
        })
        .collect()
}

pub fn check_admissible<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    f: &[T],
    tol: T,
) -> Result<(), TightSpanError> {
    check_len(f, space.size())?;
    for i in 0..f.len() {
        for j in i..f.len() {
            let short = space.dist(i, j) - f[i] - f[j];
            if short > tol {
                return Err(TightSpanError::NotAdmissible {
                    i,
                    j,
                    shortfall: short.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Extremality<T> {
    pub extremal: bool,
    /// `max_x (f(x) − q(f)(x))`, non-negative for admissible `f`.
    pub slack: T,
    pub worst: usize,
}

pub fn is_extremal<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    f: &[T],
    tol: T,
) -> Result<Extremality<T>, TightSpanError> {
    check_admissible(space, f, tol)?;
    let q = hull_operator(space, f);
    let mut slack = T::zero();
    let mut worst = 0;
    for x in 0..f.len() {
        let s = (f[x] - q[x]).abs();
        if s > slack {
            slack = s;
            worst = x;
        }
    }
    Ok(Extremality {
        extremal: slack <= tol,
        slack,
        worst,
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Projection {
    pub values: Vec<f64>,
    pub iterations: usize,
    pub slack: f64,
}

/// Iterates `g ← (g + q(g))/2` until the extremality slack is at most `tol`.
///
/// The sequence decreases pointwise and stays admissible; it commutes with
/// isometries of `X`.
pub fn project_to_hull(
    space: &FiniteMetricSpace<f64>,
    f: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<Projection, TightSpanError> {
    check_admissible(space, f, crate::ABS_TOL)?;
    let mut g = f.to_vec();
    for it in 0..=max_iter {
        let q = hull_operator(space, &g);
        let slack = g.iter().zip(&q).fold(0.0f64, |m, (a, b)| m.max(a - b));
        if slack <= tol {
            return Ok(Projection {
                values: g,
                iterations: it,
                slack,
            });
        }
        if it == max_iter {
            return Err(TightSpanError::NoConvergence {
                iterations: it,
                slack,
            });
        }
        for (v, w) in g.iter_mut().zip(&q) {
            *v = (*v + w) / 2.0;
        }
    }
    unreachable!()
}

/// Lowers `f(x)` to `q(f)(x)` once per point, in index order.
///
/// Exact for rational distances and extremal after a single pass: lowering
/// a later point keeps every earlier point tight. The result depends on the
/// order, so unlike [`project_to_hull`] it does not commute with isometries.
pub fn lower_to_hull<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    f: &[T],
) -> Result<Vec<T>, TightSpanError> {
    check_admissible(space, f, T::tolerance())?;
    let mut g = f.to_vec();
    for x in 0..g.len() {
        let row = space.row(x);
        g[x] = (0..row.len())
            .filter(|&y| y != x)
            .fold(T::zero(), |m, y| m.max_of(row[y] - g[y]));
    }
    Ok(g)
}

/// Four-point delta of extremal functions under the sup metric.
pub fn hull_sample_delta(
    space: &FiniteMetricSpace<f64>,
    sample: &[Vec<f64>],
    tol: f64,
    mode: DeltaMode,
) -> Result<DeltaEstimate<f64>, TightSpanError> {
    for (index, f) in sample.iter().enumerate() {
        let e = is_extremal(space, f, tol)?;
        if !e.extremal {
            return Err(TightSpanError::NotExtremal {
                index,
                slack: e.slack,
            });
        }
    }
    let hull = FiniteMetricSpace::from_fn_unchecked(sample.len(), |i, j| {
        sup_distance(&sample[i], &sample[j])
    });
    Ok(four_point_delta(&hull, mode)?)
}

/// `f ∘ φ⁻¹` for a distance-preserving permutation `φ`.
pub fn extend_isometry<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    phi: &[usize],
    f: &[T],
) -> Result<Vec<T>, TightSpanError> {
    let n = space.size();
    check_len(f, n)?;
    if phi.len() != n {
        return Err(TightSpanError::NotPermutation);
    }
    let mut hit = alloc::vec![false; n];
    for &p in phi {
        if p >= n || core::mem::replace(&mut hit[p], true) {
            return Err(TightSpanError::NotPermutation);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if (space.dist(phi[i], phi[j]) - space.dist(i, j)).abs() > T::tolerance() {
                return Err(TightSpanError::NotIsometry { i, j });
            }
        }
    }
    let mut g = f.to_vec();
    for x in 0..n {
        g[phi[x]] = f[x];
    }
    Ok(g)
}
