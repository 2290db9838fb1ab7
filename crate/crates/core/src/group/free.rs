use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::parse::{parse_raw, ParseError};
use super::Group;

/// A letter `x_index^{±1}` of the symmetrized alphabet.
///
/// Ordering is `a < A < b < B < ...`, which fixes the lexicographic order of
/// words used everywhere else.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Generator {
    pub index: u32,
    pub inverse: bool,
}

impl Generator {
    pub const fn new(index: u32) -> Self {
        Generator {
            index,
            inverse: false,
        }
    }

    pub const fn inv(self) -> Self {
        Generator {
            index: self.index,
            inverse: !self.inverse,
        }
    }

    pub const fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Letter used in the text syntax: `a`..`z`, uppercase for inverses.
    pub fn symbol(self) -> char {
        let base = if self.index < 26 {
            (b'a' + self.index as u8) as char
        } else {
            '?'
        };
        if self.inverse {
            base.to_ascii_uppercase()
        } else {
            base
        }
    }
}

/// A freely reduced word; the empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FreeWord {
    letters: Vec<Generator>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord {
            letters: Vec::new(),
        }
    }

    pub fn generator(index: u32) -> Self {
        FreeWord {
            letters: alloc::vec![Generator::new(index)],
        }
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Generator>>(letters: I) -> Self {
        let mut out: Vec<Generator> = Vec::new();
        for g in letters {
            push_reduced(&mut out, g);
        }
        FreeWord { letters: out }
    }

    /// Parses the text syntax (`ab^3A`, `(ab)^-2`, ...); letter `a` is index 0.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let raw = parse_raw(text)?;
        let mut out = Vec::new();
        for l in raw {
            let g = Generator::new((l.letter as u8 - b'a') as u32);
            let g = if l.exponent < 0 { g.inv() } else { g };
            for _ in 0..l.exponent.unsigned_abs() {
                push_reduced(&mut out, g);
            }
        }
        Ok(FreeWord { letters: out })
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Smallest rank whose alphabet contains every letter of the word.
    pub fn min_rank(&self) -> u32 {
        self.letters.iter().map(|g| g.index + 1).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        FreeWord {
            letters: self.letters.iter().rev().map(|g| g.inv()).collect(),
        }
    }

    /// Free reduction of the concatenation `self · other`.
    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut cancel = 0;
        let (a, b) = (&self.letters, &other.letters);
        while cancel < a.len() && cancel < b.len() && a[a.len() - 1 - cancel] == b[cancel].inv() {
            cancel += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * cancel);
        letters.extend_from_slice(&a[..a.len() - cancel]);
        letters.extend_from_slice(&b[cancel..]);
        FreeWord { letters }
    }

    /// Splits `self = conjugator · core · conjugator⁻¹` with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (FreeWord, FreeWord) {
        let w = &self.letters;
        let mut k = 0;
        while 2 * k + 1 < w.len() && w[k] == w[w.len() - 1 - k].inv() {
            k += 1;
        }
        let core = FreeWord {
            letters: w[k..w.len() - k].to_vec(),
        };
        let conjugator = FreeWord {
            letters: w[..k].to_vec(),
        };
        (core, conjugator)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(f), Some(l)) => self.letters.len() == 1 || *f != l.inv(),
            _ => true,
        }
    }

    /// `selfⁿ`, computed through the cyclic reduction so large exponents are cheap.
    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let n = n.unsigned_abs() as usize;
        if n == 0 || base.is_identity() {
            return FreeWord::identity();
        }
        let (core, conj) = base.cyclic_reduce();
        let mut letters = Vec::with_capacity(2 * conj.len() + n * core.len());
        letters.extend_from_slice(&conj.letters);
        for _ in 0..n {
            letters.extend_from_slice(&core.letters);
        }
        letters.extend(conj.letters.iter().rev().map(|g| g.inv()));
        FreeWord { letters }
    }

    /// True when the word equals `uᵏ` for some `k ≥ 2`.
    pub fn is_proper_power(&self) -> bool {
        let n = self.letters.len();
        (1..n)
            .filter(|d| n % d == 0)
            .any(|d| (d..n).all(|i| self.letters[i] == self.letters[i - d]))
    }

    /// Contiguous subword `[start, end)`; subwords of reduced words are reduced.
    pub fn subword(&self, start: usize, end: usize) -> FreeWord {
        FreeWord {
            letters: self.letters[start..end].to_vec(),
        }
    }

    pub fn exponent_sum(&self, index: u32) -> i64 {
        self.letters
            .iter()
            .filter(|g| g.index == index)
            .map(|g| g.sign() as i64)
            .sum()
    }

    pub fn to_text(&self) -> String {
        alloc::format!("{self}")
    }
}

fn push_reduced(out: &mut Vec<Generator>, g: Generator) {
    if out.last() == Some(&g.inv()) {
        out.pop();
    } else {
        out.push(g);
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        while i < self.letters.len() {
            let g = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == g {
                j += 1;
            }
            write!(f, "{}", g.symbol())?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeWord({self})")
    }
}

/// The free group of a given rank with its standard basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeGroup {
    pub rank: u32,
}

impl FreeGroup {
    pub fn new(rank: u32) -> Self {
        FreeGroup { rank }
    }

    /// Basis `x_0, ..., x_{rank-1}` (inverses are added by ball enumeration).
    pub fn standard_generators(&self) -> Vec<FreeWord> {
        (0..self.rank).map(FreeWord::generator).collect()
    }
}

impl Group for FreeGroup {
    type Element = FreeWord;

    fn identity(&self) -> FreeWord {
        FreeWord::identity()
    }

    fn multiply(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        a.mul(b)
    }

    fn invert(&self, a: &FreeWord) -> FreeWord {
        a.inverse()
    }

    fn pow(&self, a: &FreeWord, n: i64) -> FreeWord {
        a.pow(n)
    }

    fn parse(&self, text: &str) -> Result<FreeWord, ParseError> {
        let w = FreeWord::parse(text)?;
        if w.min_rank() > self.rank {
            return Err(ParseError::new(
                0,
                alloc::format!("letter outside the rank-{} alphabet", self.rank),
            ));
        }
        Ok(w)
    }

    fn render(&self, a: &FreeWord) -> String {
        a.to_text()
    }
}
