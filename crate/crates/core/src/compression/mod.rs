//! Compressed generating sets of free groups and the prefix-sequence map.

mod bf;
mod genset;
mod length;
mod pi;

use thiserror::Error;

pub use bf::{make_bf_family, overlap_scan, overlap_surrogates, BfFamily, OverlapReport};
pub use genset::{subword_membership, Cap, CompressedGenSet, Family};
pub use length::{
    compressed_word_length, greedy_positions, lengths_from, prefix_lengths, reach,
    verify_length_bounds, LengthBoundReport, DEFAULT_LENGTH_BUDGET,
};
pub use pi::{
    borel_caps, borel_map_f, order_preservation_check, qks_compare, OrderReport, PiConfig,
    PiPrefix, QksReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompressionError {
    #[error("family {index}: {reason}")]
    InvalidFamily { index: usize, reason: &'static str },
    #[error("length budget of {cap} cells exceeded; word length {upper_bound} is an upper bound")]
    BudgetExceeded { cap: u64, upper_bound: usize },
    #[error("letter at position {position} is not generated")]
    Unreachable { position: usize },
    #[error("no family with index {index}")]
    FamilyIndex { index: usize },
    #[error("prefix value r({index}) = {value} is outside 1..={index}")]
    InvalidPrefix { index: usize, value: u32 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("arithmetic overflow")]
    Overflow,
    #[error(transparent)]
    Metric(#[from] crate::metric::MetricError),
}
