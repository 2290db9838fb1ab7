use alloc::vec::Vec;
use core::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Num, Signed, ToPrimitive};

use super::MetricError;

/// Numeric type of distances: `f64`, or exact rationals.
pub trait Scalar: Copy + PartialOrd + Debug + Num + Signed + ToPrimitive {
    /// Slack allowed in comparisons; zero for exact types.
    fn tolerance() -> Self;

    fn half(self) -> Self {
        self / (Self::one() + Self::one())
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        crate::ABS_TOL
    }
}

impl Scalar for Ratio<i64> {
    fn tolerance() -> Self {
        Ratio::from_integer(0)
    }
}

/// A finite metric space given by its full distance matrix.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiniteMetricSpace<T = f64> {
    size: usize,
    dist: Vec<T>,
}

impl<T: Scalar> FiniteMetricSpace<T> {
    /// Builds and validates (zero diagonal, symmetry, non-negativity, triangle inequality).
    pub fn from_matrix(rows: Vec<Vec<T>>) -> Result<Self, MetricError> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(MetricError::NotSquare);
        }
        let space = FiniteMetricSpace {
            size,
            dist: rows.into_iter().flatten().collect(),
        };
        space.validate()?;
        Ok(space)
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self, MetricError> {
        let mut dist = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                dist.push(f(i, j));
            }
        }
        let space = FiniteMetricSpace { size, dist };
        space.validate()?;
        Ok(space)
    }

    /// Skips validation; for callers that construct metrics by shortest paths.
    pub fn from_fn_unchecked(size: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut dist = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                dist.push(f(i, j));
            }
        }
        FiniteMetricSpace { size, dist }
    }

    pub fn validate(&self) -> Result<(), MetricError> {
        let tol = T::tolerance();
        let n = self.size;
        for i in 0..n {
            if self.dist(i, i).abs() > tol {
                return Err(MetricError::NonZeroDiagonal { i });
            }
            for j in 0..n {
                let d = self.dist(i, j);
                if d < -tol {
                    return Err(MetricError::Negative { i, j });
                }
                if (d - self.dist(j, i)).abs() > tol {
                    return Err(MetricError::Asymmetric { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.dist(i, k) > self.dist(i, j) + self.dist(j, k) + tol {
                        return Err(MetricError::Triangle { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> T {
        self.dist[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.dist[i * self.size..(i + 1) * self.size]
    }

    /// `(x,y)_z = ½(d(x,z) + d(y,z) − d(x,y))`.
    #[inline]
    pub fn gromov_product(&self, x: usize, y: usize, z: usize) -> T {
        (self.dist(x, z) + self.dist(y, z) - self.dist(x, y)).half()
    }

    pub fn to_f64(&self) -> FiniteMetricSpace<f64> {
        FiniteMetricSpace {
            size: self.size,
            dist: self
                .dist
                .iter()
                .map(|d| d.to_f64().unwrap_or(f64::NAN))
                .collect(),
        }
    }

    /// Subspace on the given point indices.
    pub fn restrict(&self, points: &[usize]) -> FiniteMetricSpace<T> {
        FiniteMetricSpace::from_fn_unchecked(points.len(), |i, j| self.dist(points[i], points[j]))
    }
}
