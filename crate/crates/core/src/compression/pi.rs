use alloc::vec::Vec;

use super::length::{lengths_from, reach};
use super::{Cap, CompressedGenSet, CompressionError, Family};
use crate::group::FreeWord;

/// Finite prefix `r(1..m)` of a sequence with `1 ≤ r(n) ≤ n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<u32>", into = "Vec<u32>"))]
pub struct PiPrefix(Vec<u32>);

impl PiPrefix {
    pub fn new(values: Vec<u32>) -> Result<Self, CompressionError> {
        for (i, &v) in values.iter().enumerate() {
            if v < 1 || v as usize > i + 1 {
                return Err(CompressionError::InvalidPrefix {
                    index: i + 1,
                    value: v,
                });
            }
        }
        Ok(PiPrefix(values))
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every prefix of length `m`, in lexicographic order.
    pub fn all(m: usize) -> Vec<PiPrefix> {
        let mut out = alloc::vec![Vec::new()];
        for n in 1..=m as u32 {
            out = out
                .into_iter()
                .flat_map(|p: Vec<u32>| {
                    (1..=n).map(move |v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(PiPrefix).collect()
    }
}

impl TryFrom<Vec<u32>> for PiPrefix {
    type Error = CompressionError;
    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        PiPrefix::new(v)
    }
}

impl From<PiPrefix> for Vec<u32> {
    fn from(p: PiPrefix) -> Self {
        p.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QksReport {
    /// `max_n (r(n) − s(n))`.
    pub sup_diff: i64,
    /// `max_n |r(n) − s(n)|`.
    pub abs_diff: i64,
    /// `sup_diff ≤ threshold`.
    pub related: bool,
}

pub fn qks_compare(
    r: &PiPrefix,
    s: &PiPrefix,
    threshold: i64,
) -> Result<QksReport, CompressionError> {
    if r.len() != s.len() {
        return Err(CompressionError::LengthMismatch {
            left: r.len(),
            right: s.len(),
        });
    }
    let diffs = r.0.iter().zip(&s.0).map(|(&a, &b)| a as i64 - b as i64);
    let sup_diff = diffs.clone().max().unwrap_or(0);
    let abs_diff = diffs.map(i64::abs).max().unwrap_or(0);
    Ok(QksReport {
        sup_diff,
        abs_diff,
        related: sup_diff <= threshold,
    })
}

/// Alphabet, family words and the `Nᵢ` list behind the map `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiConfig {
    pub base: Vec<u32>,
    pub families: Vec<FreeWord>,
    pub big_n: Vec<u64>,
}

/// Caps `nᵢ = 2^{i−r(i)}·Nᵢ` for the first `|r|` families.
pub fn borel_caps(r: &PiPrefix, config: &PiConfig) -> Result<Vec<u64>, CompressionError> {
    let m = r.len();
    if config.big_n.len() < m || config.families.len() < m {
        return Err(CompressionError::LengthMismatch {
            left: m,
            right: config.big_n.len().min(config.families.len()),
        });
    }
    r.values()
        .iter()
        .enumerate()
        .map(|(i, &ri)| {
            let shift = (i as u32 + 1) - ri;
            1u64.checked_shl(shift)
                .filter(|_| shift < 64)
                .and_then(|f| f.checked_mul(config.big_n[i]))
                .ok_or(CompressionError::Overflow)
        })
        .collect()
}

pub fn borel_map_f(r: &PiPrefix, config: &PiConfig) -> Result<CompressedGenSet, CompressionError> {
    let caps = borel_caps(r, config)?;
    let families = caps
        .iter()
        .zip(&config.families)
        .map(|(&n, w)| Family {
            w: w.clone(),
            cap: Cap::Finite(n),
        })
        .collect();
    CompressedGenSet::new(config.base.clone(), families)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrderReport {
    pub k: i64,
    pub bound: u64,
    pub max_length: usize,
    /// `max_length / bound`.
    pub max_ratio: f64,
    /// `(family, offset, subword length)` of the first longest generator.
    pub worst: Option<(usize, usize, usize)>,
    /// Number of generators of `f(s)` checked, counted by start offset and length.
    pub checked: u64,
    pub passed: bool,
}

/// Checks `|u|_{f(r)} ≤ 2^k` for every generator `u` of `f(s)`, with `k`
/// the sup-difference of `r` over `s`.
///
/// Each subword of `wⁿ` is a prefix of `wⁿ[o..]` for `o = start mod |w|`,
/// and inverses have the same length, so one greedy run per offset decides
/// all of them.
pub fn order_preservation_check(
    r: &PiPrefix,
    s: &PiPrefix,
    config: &PiConfig,
) -> Result<OrderReport, CompressionError> {
    let k = qks_compare(r, s, 0)?.sup_diff;
    let bound = 1u64
        .checked_shl(k.max(0) as u32)
        .filter(|_| k < 64)
        .ok_or(CompressionError::Overflow)?;
    let fr = borel_map_f(r, config)?;
    let fs = borel_map_f(s, config)?;
    let mut max_length = if fs.base().is_empty() { 0 } else { 1 };
    let mut worst = None;
    let mut checked = fs.base().len() as u64;
    for (i, fam) in fs.families().iter().enumerate() {
        let Cap::Finite(n) = fam.cap else {
            unreachable!()
        };
        let v = fam
            .w
            .pow(i64::try_from(n).map_err(|_| CompressionError::Overflow)?);
        let table = reach(v.letters(), &fr);
        for o in 0..fam.w.len().min(v.len()) {
            let lens = lengths_from(&table, o)?;
            checked += (lens.len() - 1) as u64;
            // lengths are non-decreasing in the end point
            let top = *lens.last().unwrap();
            if top > max_length {
                max_length = top;
                worst = Some((i, o, v.len() - o));
            }
        }
    }
    Ok(OrderReport {
        k,
        bound,
        max_length,
        max_ratio: max_length as f64 / bound as f64,
        worst,
        checked,
        passed: max_length as u64 <= bound,
    })
}
