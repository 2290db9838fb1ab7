use core::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FiniteMetricSpace, MetricError, Scalar};

/// Ordered quadruples allowed in an exhaustive scan unless overridden.
pub const DEFAULT_QUADRUPLE_CAP: u64 = 500_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", tag = "kind"))]
pub enum DeltaMode {
    Exhaustive { cap: u64 },
    Sampled { count: u64, seed: u64 },
}

impl DeltaMode {
    pub fn exhaustive() -> Self {
        DeltaMode::Exhaustive {
            cap: DEFAULT_QUADRUPLE_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeltaEstimate<T = f64> {
    /// Largest defect seen, clamped at zero.
    pub delta: T,
    /// Unclamped defect of `witness`.
    pub raw: T,
    /// `(x, y, z, t)`: first quadruple in scan order attaining `raw`.
    pub witness: [usize; 4],
    pub sampled: bool,
    pub seed: Option<u64>,
    pub quadruples_checked: u64,
}

/// `min{(x,y)_t, (y,z)_t} − (x,z)_t`.
#[inline]
pub fn four_point_defect<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    x: usize,
    y: usize,
    z: usize,
    t: usize,
) -> T {
    let a = space.gromov_product(x, y, t);
    let b = space.gromov_product(y, z, t);
    a.min_of(b) - space.gromov_product(x, z, t)
}

/// Partial result of a scan; partials over consecutive `t` ranges merge in order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaScan<T> {
    pub best: Option<(T, [usize; 4])>,
    pub checked: u64,
}

impl<T: Scalar> DeltaScan<T> {
    pub fn empty() -> Self {
        DeltaScan {
            best: None,
            checked: 0,
        }
    }

    fn offer(&mut self, d: T, q: [usize; 4]) {
        self.checked += 1;
        match self.best {
            Some((b, _)) if !(d > b) => {}
            _ => self.best = Some((d, q)),
        }
    }

    /// Combines with a scan of a later range; ties keep the earlier witness.
    pub fn merge(self, later: DeltaScan<T>) -> Self {
        let best = match (self.best, later.best) {
            (Some(a), Some(b)) => Some(if b.0 > a.0 { b } else { a }),
            (a, b) => a.or(b),
        };
        DeltaScan {
            best,
            checked: self.checked + later.checked,
        }
    }

    pub fn finish(self, sampled: bool, seed: Option<u64>) -> Result<DeltaEstimate<T>, MetricError> {
        let (raw, witness) = self.best.ok_or(MetricError::EmptyDomain)?;
        Ok(DeltaEstimate {
            delta: raw.max_of(T::zero()),
            raw,
            witness,
            sampled,
            seed,
            quadruples_checked: self.checked,
        })
    }
}

/// Exhaustive scan of all ordered quadruples whose base point `t` lies in `ts`.
/// Order: `t`, then `x`, `y`, `z`.
pub fn scan_quadruples<T: Scalar>(space: &FiniteMetricSpace<T>, ts: Range<usize>) -> DeltaScan<T> {
    let n = space.size();
    let mut scan = DeltaScan::empty();
    for t in ts {
        let dt = space.row(t);
        for x in 0..n {
            let dx = space.row(x);
            for y in 0..n {
                let dy = space.row(y);
                // 2(x,y)_t
                let xy = dt[x] + dt[y] - dx[y];
                for z in 0..n {
                    let yz = dt[y] + dt[z] - dy[z];
                    let xz = dt[x] + dt[z] - dx[z];
                    let d = (xy.min_of(yz) - xz).half();
                    scan.offer(d, [x, y, z, t]);
                }
            }
        }
    }
    scan
}

/// Number of ordered quadruples on `n` points, saturating.
pub fn quadruple_count(n: usize) -> u64 {
    (n as u64)
        .saturating_mul(n as u64)
        .saturating_mul(n as u64)
        .saturating_mul(n as u64)
}

/// Four-point delta estimate of a finite metric space.
pub fn four_point_delta<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    mode: DeltaMode,
) -> Result<DeltaEstimate<T>, MetricError> {
    let n = space.size();
    if n == 0 {
        return Err(MetricError::EmptyDomain);
    }
    match mode {
        DeltaMode::Exhaustive { cap } => {
            let needed = quadruple_count(n);
            if needed > cap {
                return Err(MetricError::BudgetExceeded { cap, needed });
            }
            scan_quadruples(space, 0..n).finish(false, None)
        }
        DeltaMode::Sampled { count, seed } => {
            sample_quadruples(space, count, seed).finish(true, Some(seed))
        }
    }
}

/// `count` uniform ordered quadruples drawn from a ChaCha8 stream seeded with `seed`.
pub fn sample_quadruples<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    count: u64,
    seed: u64,
) -> DeltaScan<T> {
    let n = space.size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scan = DeltaScan::empty();
    for _ in 0..count {
        let x = rng.gen_range(0..n);
        let y = rng.gen_range(0..n);
        let z = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        scan.offer(four_point_defect(space, x, y, z, t), [x, y, z, t]);
    }
    scan
}
