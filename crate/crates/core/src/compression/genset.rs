use alloc::vec::Vec;
use core::fmt;

use super::CompressionError;
use crate::group::{FreeWord, Generator};

/// Exponent cap `n` of a family `S(w, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cap {
    Finite(u64),
    Infinite,
}

impl Cap {
    /// Longest subword length `n·|w|` (saturating), or `None` when unbounded.
    pub fn span(self, period: usize) -> Option<u64> {
        match self {
            Cap::Finite(n) => Some(n.saturating_mul(period as u64)),
            Cap::Infinite => None,
        }
    }

    /// `⌈k/n⌉`, reading `⌈k/∞⌉` as 1 for `k ≥ 1`.
    pub fn ceil_div(self, k: u64) -> u64 {
        match self {
            _ if k == 0 => 0,
            Cap::Finite(n) => k.div_ceil(n),
            Cap::Infinite => 1,
        }
    }

    /// `k/n`, zero for the infinite cap.
    pub fn ratio(self, k: u64) -> f64 {
        match self {
            Cap::Finite(n) => k as f64 / n as f64,
            Cap::Infinite => 0.0,
        }
    }
}

impl fmt::Display for Cap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cap::Finite(n) => write!(f, "{n}"),
            Cap::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub w: FreeWord,
    pub cap: Cap,
}

/// `X ∪ ⋃ᵢ S(wᵢ, nᵢ)` over a free basis, where `S(w, n)` collects the
/// subwords of `wⁿ` and `w⁻ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedGenSet {
    base: Vec<u32>,
    families: Vec<Family>,
}

impl CompressedGenSet {
    pub fn new(base: Vec<u32>, families: Vec<Family>) -> Result<Self, CompressionError> {
        for (i, f) in families.iter().enumerate() {
            if f.w.is_empty() {
                return Err(CompressionError::InvalidFamily {
                    index: i,
                    reason: "empty word",
                });
            }
            if !f.w.is_cyclically_reduced() {
                return Err(CompressionError::InvalidFamily {
                    index: i,
                    reason: "word is not cyclically reduced",
                });
            }
            if f.cap == Cap::Finite(0) {
                return Err(CompressionError::InvalidFamily {
                    index: i,
                    reason: "cap must be positive",
                });
            }
        }
        let mut base = base;
        base.sort_unstable();
        base.dedup();
        Ok(CompressedGenSet { base, families })
    }

    /// Base alphabet `{x_0, ..., x_{rank-1}}` with the given families.
    pub fn with_rank(rank: u32, families: Vec<Family>) -> Result<Self, CompressionError> {
        Self::new((0..rank).collect(), families)
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn in_base(&self, g: Generator) -> bool {
        self.base.binary_search(&g.index).is_ok()
    }

    /// Membership in the represented generating set (the identity excluded).
    pub fn contains(&self, u: &FreeWord) -> bool {
        match u.letters() {
            [] => false,
            [g] if self.in_base(*g) => true,
            _ => self
                .families
                .iter()
                .any(|f| subword_membership(u, &f.w, f.cap)),
        }
    }
}

/// Whether `u` is a contiguous subword of `wⁿ` or `w⁻ⁿ` (of any power for
/// the infinite cap). `w` must be cyclically reduced; the empty word counts.
pub fn subword_membership(u: &FreeWord, w: &FreeWord, cap: Cap) -> bool {
    let fits = |word: &FreeWord| {
        let p = word.len();
        let span = cap.span(p);
        let wl = word.letters();
        (0..p).any(|o| {
            span.map_or(true, |s| (o + u.len()) as u64 <= s)
                && u.letters()
                    .iter()
                    .enumerate()
                    .all(|(t, &g)| wl[(o + t) % p] == g)
        })
    };
    u.is_empty() || (!w.is_empty() && (fits(w) || fits(&w.inverse())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(s).unwrap()
    }

    /// Oracle: every subword of the written words w^n and w^-n.
    fn all_subwords(word: &FreeWord, n: i64) -> Vec<FreeWord> {
        let mut out = Vec::new();
        for p in [word.pow(n), word.pow(-n)] {
            for i in 0..p.len() {
                for j in i + 1..=p.len() {
                    out.push(p.subword(i, j));
                }
            }
        }
        out
    }

    #[test]
    fn membership_examples() {
        let ab = w("ab");
        assert!(subword_membership(&ab, &ab, Cap::Finite(1)));
        assert!(subword_membership(&w("ba"), &ab, Cap::Finite(2)));
        assert!(!subword_membership(&w("ba"), &ab, Cap::Finite(1)));
        assert!(subword_membership(&w("BA"), &ab, Cap::Finite(1)));
        assert!(subword_membership(&w("(ba)^40"), &ab, Cap::Infinite));
        assert!(!subword_membership(&w("abb"), &ab, Cap::Infinite));
    }

    #[test]
    fn membership_matches_subword_oracle() {
        let words = ["ab", "ab^3", "aBab", "abAB"];
        for s in words {
            let word = w(s);
            for n in 1..=3 {
                let subs = all_subwords(&word, n);
                // every short reduced word over a,b
                let f2 = crate::group::FreeGroup::new(2);
                let ball = crate::group::enumerate_ball(&f2, &f2.standard_generators(), 6, 1 << 20)
                    .unwrap();
                for u in ball.elements().iter().skip(1) {
                    assert_eq!(
                        subword_membership(u, &word, Cap::Finite(n as u64)),
                        subs.contains(u),
                        "{u} in S({s},{n})"
                    );
                }
            }
        }
    }

    #[test]
    fn caps() {
        assert_eq!(Cap::Finite(3).ceil_div(7), 3);
        assert_eq!(Cap::Infinite.ceil_div(7), 1);
        assert_eq!(Cap::Infinite.ceil_div(0), 0);
        assert!(Cap::Finite(2) < Cap::Finite(3) && Cap::Finite(3) < Cap::Infinite);
    }

    #[test]
    fn genset_validation() {
        assert!(CompressedGenSet::with_rank(
            2,
            vec![Family {
                w: w("abA"),
                cap: Cap::Finite(2)
            }]
        )
        .is_err());
        assert!(CompressedGenSet::with_rank(
            2,
            vec![Family {
                w: w("ab"),
                cap: Cap::Finite(0)
            }]
        )
        .is_err());
        let s = CompressedGenSet::with_rank(
            2,
            vec![Family {
                w: w("ab"),
                cap: Cap::Finite(2),
            }],
        )
        .unwrap();
        assert!(s.contains(&w("B")));
        assert!(s.contains(&w("bab")));
        assert!(!s.contains(&w("1")));
        assert!(!s.contains(&w("b^2")));
    }
}
