//! Exact word length with respect to a compressed generating set.
//!
//! Every `S(w, n)` is closed under taking subwords, and so is the base
//! alphabet. In the Cayley tree of the free basis, projecting a path of
//! `W`-jumps onto the segment `[1, g]` therefore yields a path of no more
//! jumps along the segment itself, each jump labelled by a subword of `g`
//! lying in `W`. Along the segment, the positions reachable in one jump from
//! `i` form an interval `[i, reach(i)]` with `reach` non-decreasing, so the
//! greedy jump sequence is optimal. The cost is `O(|g| · Σ|wᵢ|)`.

use alloc::vec;
use alloc::vec::Vec;

use super::{CompressedGenSet, CompressionError};
use crate::group::{FreeWord, Generator};

/// Default bound on the number of table cells [`reach`] may fill.
pub const DEFAULT_LENGTH_BUDGET: u64 = 4_000_000_000;

fn cells(len: usize, set: &CompressedGenSet) -> u64 {
    let per: u64 = set.families().iter().map(|f| 2 * f.w.len() as u64).sum();
    (len as u64).saturating_mul(per.max(1))
}

/// `reach[i]`: the largest `j` with `letters[i..j]` in the generating set
/// (or `i` itself if no letter starting at `i` is a generator).
pub fn reach(letters: &[Generator], set: &CompressedGenSet) -> Vec<usize> {
    let n = letters.len();
    let mut out: Vec<usize> = (0..n)
        .map(|i| if set.in_base(letters[i]) { i + 1 } else { i })
        .collect();
    for fam in set.families() {
        for word in [fam.w.clone(), fam.w.inverse()] {
            let u = word.letters();
            let p = u.len();
            let span = fam.cap.span(p);
            // lce[o]: common extension of letters[i..] and u^∞[o..]
            let mut next = vec![0u64; p];
            let mut cur = vec![0u64; p];
            for i in (0..n).rev() {
                let mut best = 0u64;
                for o in 0..p {
                    cur[o] = if letters[i] == u[o] {
                        1 + next[(o + 1) % p]
                    } else {
                        0
                    };
                    let m = match span {
                        Some(s) => cur[o].min(s.saturating_sub(o as u64)),
                        None => cur[o],
                    };
                    best = best.max(m);
                }
                out[i] = out[i].max(i + best as usize);
                core::mem::swap(&mut cur, &mut next);
            }
        }
    }
    out
}

/// Greedy jump positions `0 = G₀ < G₁ < … ≤ G_t = end` starting at `start`.
pub fn greedy_positions(reach: &[usize], start: usize) -> Result<Vec<usize>, CompressionError> {
    let end = reach.len();
    let mut pos = start;
    let mut out = vec![start];
    while pos < end {
        let nxt = reach[pos];
        if nxt <= pos {
            return Err(CompressionError::Unreachable { position: pos });
        }
        pos = nxt;
        out.push(pos);
    }
    Ok(out)
}

/// `|g|_W`, exactly.
pub fn compressed_word_length(
    g: &FreeWord,
    set: &CompressedGenSet,
    budget: u64,
) -> Result<usize, CompressionError> {
    let needed = cells(g.len(), set);
    if needed > budget {
        return Err(CompressionError::BudgetExceeded {
            cap: budget,
            upper_bound: g.len(),
        });
    }
    let r = reach(g.letters(), set);
    Ok(greedy_positions(&r, 0)?.len() - 1)
}

/// `|g[0..j]|_W` for every `j = 0..=|g|`, by a single greedy run.
pub fn prefix_lengths(
    g: &FreeWord,
    set: &CompressedGenSet,
) -> Result<Vec<usize>, CompressionError> {
    let r = reach(g.letters(), set);
    lengths_from(&r, 0)
}

/// `|v[start..j]|_W` for `j = start..=|v|`, given the reach table of `v`.
pub fn lengths_from(reach: &[usize], start: usize) -> Result<Vec<usize>, CompressionError> {
    let pos = greedy_positions(reach, start)?;
    let mut out = Vec::with_capacity(reach.len() + 1 - start);
    let mut t = 0;
    for j in start..=reach.len() {
        while pos[t] < j {
            t += 1;
        }
        out.push(t);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LengthBoundReport {
    pub family: usize,
    pub k: u64,
    /// `|w_j^k|_W`.
    pub length: usize,
    /// `⌈k/n_j⌉`.
    pub upper: u64,
    pub upper_ok: bool,
    pub alpha: f64,
    /// `α·k/n_j − 2`.
    pub lower: f64,
    pub lower_ok: bool,
    /// Largest `α` for which the lower bound holds at this `k`.
    pub alpha_max: f64,
}

/// Checks `⌈k/n_j⌉ ≥ |w_j^k|_W ≥ α·k/n_j − 2`.
pub fn verify_length_bounds(
    set: &CompressedGenSet,
    j: usize,
    k: u64,
    alpha: f64,
    budget: u64,
) -> Result<LengthBoundReport, CompressionError> {
    let fam = set
        .families()
        .get(j)
        .ok_or(CompressionError::FamilyIndex { index: j })?;
    let exp = i64::try_from(k).map_err(|_| CompressionError::Overflow)?;
    let length = compressed_word_length(&fam.w.pow(exp), set, budget)?;
    let upper = fam.cap.ceil_div(k);
    let ratio = fam.cap.ratio(k);
    let lower = alpha * ratio - 2.0;
    let alpha_max = if ratio > 0.0 {
        (length as f64 + 2.0) / ratio
    } else {
        f64::INFINITY
    };
    Ok(LengthBoundReport {
        family: j,
        k,
        length,
        upper,
        upper_ok: length as u64 <= upper,
        alpha,
        lower,
        lower_ok: length as f64 >= lower - crate::ABS_TOL,
        alpha_max,
    })
}
