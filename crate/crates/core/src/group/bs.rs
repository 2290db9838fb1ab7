//! Baumslag-Solitar groups `BS(m,n) = <a, t | t⁻¹ aᵐ t = aⁿ>` in Britton normal form.
//!
//! An element is stored as `a^{k_1} t^{e_1} a^{k_2} t^{e_2} ... t^{e_r} a^{tail}`
//! where `0 <= k_i < |m|` when `e_i = +1` and `0 <= k_i < |n|` when
//! `e_i = -1`, and no `t^e a^0 t^{-e}` occurs. Every element has exactly one
//! such form, so structural equality is group equality.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::parse::{parse_raw, ParseError};
use super::Group;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Syllable {
    /// `a^k`
    A(i64),
    /// `t^e`; exponents other than ±1 are expanded letter by letter.
    T(i64),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BsElement {
    m: i64,
    n: i64,
    prefix: Vec<(i64, i8)>,
    tail: i64,
}

impl BsElement {
    pub fn identity(m: i64, n: i64) -> Self {
        assert!(m != 0 && n != 0, "BS(m,n) needs nonzero m and n");
        BsElement {
            m,
            n,
            prefix: Vec::new(),
            tail: 0,
        }
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn is_identity(&self) -> bool {
        self.prefix.is_empty() && self.tail == 0
    }

    /// Right-multiplies by a single syllable, keeping the normal form.
    pub fn push(&mut self, s: Syllable) {
        match s {
            Syllable::A(k) => self.tail = add(self.tail, k),
            Syllable::T(e) => {
                let step = if e > 0 { 1 } else { -1 };
                for _ in 0..e.unsigned_abs() {
                    self.push_t(step);
                }
            }
        }
    }

    fn push_t(&mut self, e: i8) {
        if let Some(&(k_last, e_last)) = self.prefix.last() {
            if e_last == -e {
                // t⁻¹ a^{jm} t = a^{jn} and t a^{jn} t⁻¹ = a^{jm}
                let (from, to) = if e == 1 {
                    (self.m, self.n)
                } else {
                    (self.n, self.m)
                };
                if self.tail % from == 0 {
                    self.prefix.pop();
                    self.tail = add(k_last, mul(self.tail / from, to));
                    return;
                }
            }
        }
        let (from, to) = if e == 1 {
            (self.m, self.n)
        } else {
            (self.n, self.m)
        };
        let r = self.tail.rem_euclid(from.abs());
        let q = (self.tail - r) / from;
        self.prefix.push((r, e));
        self.tail = mul(q, to);
    }

    /// Syllables of the normal form, zero `a`-exponents omitted.
    pub fn syllables(&self) -> Vec<Syllable> {
        let mut out = Vec::with_capacity(2 * self.prefix.len() + 1);
        for &(k, e) in &self.prefix {
            if k != 0 {
                out.push(Syllable::A(k));
            }
            out.push(Syllable::T(e as i64));
        }
        if self.tail != 0 {
            out.push(Syllable::A(self.tail));
        }
        out
    }

    /// Sum of the `t`-exponents: the homomorphism `BS(m,n) → ℤ`.
    pub fn t_exponent_sum(&self) -> i64 {
        self.prefix.iter().map(|&(_, e)| e as i64).sum()
    }

    /// Number of `t`-letters in the normal form, i.e. the displacement of the
    /// base vertex in the Bass-Serre tree.
    pub fn t_length(&self) -> usize {
        self.prefix.len()
    }

    pub fn parse(text: &str, m: i64, n: i64) -> Result<Self, ParseError> {
        let raw = parse_raw(text)?;
        let mut out = Vec::with_capacity(raw.len());
        for l in raw {
            match l.letter {
                'a' => out.push(Syllable::A(l.exponent)),
                't' => out.push(Syllable::T(l.exponent)),
                other => {
                    return Err(ParseError::new(
                        0,
                        alloc::format!("letter '{other}' is not a generator of BS(m,n)"),
                    ))
                }
            }
        }
        Ok(bs_normalize(&out, m, n))
    }
}

fn add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("BS exponent overflow")
}

fn mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("BS exponent overflow")
}

/// Britton normal form of a raw syllable sequence.
pub fn bs_normalize(syllables: &[Syllable], m: i64, n: i64) -> BsElement {
    let mut e = BsElement::identity(m, n);
    for &s in syllables {
        e.push(s);
    }
    e
}

impl fmt::Display for BsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let syl = self.syllables();
        if syl.is_empty() {
            return f.write_str("1");
        }
        for s in syl {
            match s {
                Syllable::A(k) => {
                    f.write_str(if k > 0 { "a" } else { "A" })?;
                    if k.abs() != 1 {
                        write!(f, "^{}", k.abs())?;
                    }
                }
                Syllable::T(e) => f.write_str(if e > 0 { "t" } else { "T" })?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BS({},{})[{self}]", self.m, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaumslagSolitar {
    pub m: i64,
    pub n: i64,
}

impl BaumslagSolitar {
    pub fn new(m: i64, n: i64) -> Self {
        assert!(m != 0 && n != 0, "BS(m,n) needs nonzero m and n");
        BaumslagSolitar { m, n }
    }

    pub fn a(&self) -> BsElement {
        bs_normalize(&[Syllable::A(1)], self.m, self.n)
    }

    pub fn t(&self) -> BsElement {
        bs_normalize(&[Syllable::T(1)], self.m, self.n)
    }

    pub fn standard_generators(&self) -> Vec<BsElement> {
        alloc::vec![self.a(), self.t()]
    }
}

impl Group for BaumslagSolitar {
    type Element = BsElement;

    fn identity(&self) -> BsElement {
        BsElement::identity(self.m, self.n)
    }

    fn multiply(&self, x: &BsElement, y: &BsElement) -> BsElement {
        let mut out = x.clone();
        for s in y.syllables() {
            out.push(s);
        }
        out
    }

    fn invert(&self, x: &BsElement) -> BsElement {
        let inv: Vec<Syllable> = x
            .syllables()
            .into_iter()
            .rev()
            .map(|s| match s {
                Syllable::A(k) => Syllable::A(-k),
                Syllable::T(e) => Syllable::T(-e),
            })
            .collect();
        bs_normalize(&inv, self.m, self.n)
    }

    fn parse(&self, text: &str) -> Result<BsElement, ParseError> {
        BsElement::parse(text, self.m, self.n)
    }

    fn render(&self, x: &BsElement) -> String {
        alloc::format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::enumerate_ball;
    use Syllable::{A, T};

    /// Oracle: apply the relation left to right on a flat list until stable,
    /// canonicalizing a-runs before each t exactly like a string rewriter.
    fn rewrite(m: i64, n: i64, input: &[Syllable]) -> Vec<Syllable> {
        // expand to letters then fold through the normal form by explicit rewriting rules
        let mut letters: Vec<Syllable> = Vec::new();
        for &s in input {
            match s {
                A(k) if k != 0 => letters.push(A(k)),
                T(e) => {
                    for _ in 0..e.abs() {
                        letters.push(T(e.signum()))
                    }
                }
                _ => {}
            }
        }
        loop {
            let mut changed = false;
            // merge adjacent a-syllables, drop a^0
            let mut merged: Vec<Syllable> = Vec::new();
            for s in letters.drain(..) {
                match (merged.last_mut(), s) {
                    (Some(A(k)), A(j)) => *k += j,
                    (_, s) => merged.push(s),
                }
            }
            merged.retain(|s| *s != A(0));
            letters = merged;
            for i in 0..letters.len() {
                // pinch t^e a^k t^-e (or t^e t^-e)
                if let T(e) = letters[i] {
                    let (k, j) = match letters.get(i + 1) {
                        Some(A(k)) => (*k, i + 2),
                        _ => (0, i + 1),
                    };
                    if letters.get(j) == Some(&T(-e)) {
                        let (from, to) = if e == -1 { (m, n) } else { (n, m) };
                        if k % from == 0 {
                            letters.splice(i..=j, [A(k / from * to)]);
                            changed = true;
                            break;
                        }
                    }
                }
                // move a^{qm} right through t, a^{qn} right through t⁻¹
                if let (A(k), Some(T(e))) = (letters[i], letters.get(i + 1).copied()) {
                    let (from, to) = if e == 1 { (m, n) } else { (n, m) };
                    let r = k.rem_euclid(from.abs());
                    if r != k {
                        let q = (k - r) / from;
                        letters.splice(i..=i + 1, [A(r), T(e), A(q * to)]);
                        changed = true;
                        break;
                    }
                }
            }
            if !changed {
                letters.retain(|s| *s != A(0));
                return letters;
            }
        }
    }

    #[test]
    fn defining_relation() {
        assert_eq!(bs_normalize(&[T(-1), A(2), T(1)], 2, 3).syllables(), [A(3)]);
    }

    #[test]
    fn no_pinch_stays() {
        let e = bs_normalize(&[T(-1), A(1), T(1)], 2, 3);
        assert_eq!(e.syllables(), [T(-1), A(1), T(1)]);
    }

    #[test]
    fn pinch_then_cancel() {
        let e = bs_normalize(&[T(-1), A(4), T(1), A(-1)], 2, 3);
        assert_eq!(e.syllables(), [A(5)]);
        assert_eq!(rewrite(2, 3, &[T(-1), A(4), T(1), A(-1)]), [A(5)]);
    }

    #[test]
    fn normal_form_agrees_with_rewriting_oracle() {
        let group = BaumslagSolitar::new(2, 3);
        let ball = enumerate_ball(&group, &group.standard_generators(), 3, 1 << 20).unwrap();
        for x in ball.elements() {
            for y in ball.elements().iter().step_by(3) {
                let mut raw = x.syllables();
                raw.extend(y.syllables());
                assert_eq!(
                    group.multiply(x, y).syllables(),
                    rewrite(2, 3, &raw),
                    "{x} * {y}"
                );
            }
        }
    }

    #[test]
    fn exponent_sum_invariant() {
        let raw = [A(5), T(1), A(-7), T(-1), T(-1), A(4), T(1), A(2), T(1)];
        let e = bs_normalize(&raw, 2, 3);
        assert_eq!(e.t_exponent_sum(), 1);
    }

    #[test]
    fn inverse_and_identity() {
        let g = BaumslagSolitar::new(2, 3);
        let x = g.parse("taTTa^5tA").unwrap();
        assert!(g.multiply(&x, &g.invert(&x)).is_identity());
        assert!(g.multiply(&g.invert(&x), &x).is_identity());
    }

    #[test]
    fn display_round_trip() {
        let g = BaumslagSolitar::new(2, 3);
        for s in ["1", "a", "tA^2T", "a^3t", "Ta^2T"] {
            let e = g.parse(s).unwrap();
            assert_eq!(g.parse(&g.render(&e)).unwrap(), e);
        }
        assert_eq!(g.render(&g.parse("Ta^2t").unwrap()), "a^3");
    }

    #[test]
    fn negative_parameters() {
        let g = BaumslagSolitar::new(-2, 3);
        let x = g.parse("Ta^2t").unwrap();
        assert_eq!(x.syllables(), [A(-3)]);
        let y = g.parse("Ta^-2t").unwrap();
        assert_eq!(y.syllables(), [A(3)]);
    }
}
