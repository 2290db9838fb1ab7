//! Thread pools and deterministic parallel scans.
//!
//! Work is cut into a fixed number of chunks regardless of the thread
//! count, and partial results are merged in chunk order, so outputs never
//! depend on `HYPACTIONS_THREADS`.

use hypactions_core::metric::{
    quadruple_count, sample_quadruples, scan_quadruples, DeltaEstimate, DeltaScan,
    FiniteMetricSpace, MetricError,
};
use rayon::prelude::*;

use crate::error::RunError;

pub const CHUNKS: usize = 64;
pub const THREADS_VAR: &str = "HYPACTIONS_THREADS";

/// Runs `f` on a pool sized by `HYPACTIONS_THREADS` (all cores if unset).
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, RunError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            RunError::invalid(
                THREADS_VAR,
                format!("expected a positive integer, found \"{v}\""),
            )
        })?;
        b = b.num_threads(n);
    }
    let pool = b
        .build()
        .map_err(|e| RunError::Failed(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// splitmix64 step, used to derive per-chunk seeds.
pub fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn ranges(n: usize, chunks: usize) -> Vec<std::ops::Range<usize>> {
    let chunks = chunks.clamp(1, n.max(1));
    (0..chunks)
        .map(|c| c * n / chunks..(c + 1) * n / chunks)
        .filter(|r| !r.is_empty())
        .collect()
}

/// Exhaustive four-point scan, identical to the sequential one (same value
/// and first witness in `t, x, y, z` order).
pub fn delta_exhaustive(
    space: &FiniteMetricSpace<f64>,
    cap: u64,
) -> Result<DeltaEstimate<f64>, RunError> {
    let n = space.size();
    if n == 0 {
        return Err(MetricError::EmptyDomain.into());
    }
    let needed = quadruple_count(n);
    if needed > cap {
        return Err(MetricError::BudgetExceeded { cap, needed }.into());
    }
    let parts: Vec<DeltaScan<f64>> = ranges(n, CHUNKS)
        .into_par_iter()
        .map(|r| scan_quadruples(space, r))
        .collect();
    let scan = parts.into_iter().fold(DeltaScan::empty(), DeltaScan::merge);
    Ok(scan.finish(false, None)?)
}

/// `count` sampled quadruples split over `CHUNKS` streams seeded from `seed`.
pub fn delta_sampled(
    space: &FiniteMetricSpace<f64>,
    count: u64,
    seed: u64,
) -> Result<DeltaEstimate<f64>, RunError> {
    if space.size() == 0 {
        return Err(MetricError::EmptyDomain.into());
    }
    let c = CHUNKS as u64;
    let parts: Vec<DeltaScan<f64>> = (0..c)
        .into_par_iter()
        .map(|i| {
            let share = count / c + u64::from(i < count % c);
            sample_quadruples(space, share, splitmix(seed ^ splitmix(i)))
        })
        .collect();
    let scan = parts.into_iter().fold(DeltaScan::empty(), DeltaScan::merge);
    Ok(scan.finish(true, Some(seed))?)
}
