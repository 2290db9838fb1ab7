use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::{next_down, next_up, Interval};
use super::Sl2Error;

pub type Rational = Ratio<BigInt>;

/// `d > 1` with no square factor.
pub fn is_square_free(d: i64) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2i64;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// `a + b√d` in `ℚ(√d)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quad {
    a: Rational,
    b: Rational,
    d: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Sign {
    Plus,
    Minus,
}

/// `√d ↦ sign·√d`; `precision` is the starting number of bits used to
/// enclose `√d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RealEmbedding {
    pub sign: Sign,
    pub precision: u32,
}

impl RealEmbedding {
    pub const PLUS: RealEmbedding = RealEmbedding {
        sign: Sign::Plus,
        precision: 64,
    };
    pub const MINUS: RealEmbedding = RealEmbedding {
        sign: Sign::Minus,
        precision: 64,
    };
}

/// Largest bit count tried before giving up on an enclosure.
const MAX_BITS: u32 = 1 << 14;

fn sqrt_bounds(d: i64, bits: u32) -> (Rational, Rational) {
    let scale = BigInt::one() << (bits as usize);
    let s = (BigInt::from(d) * &scale * &scale).sqrt();
    (
        Ratio::new(s.clone(), scale.clone()),
        Ratio::new(s + 1, scale),
    )
}

/// `x` rounded to f64 and stepped two ulps outward in the given direction.
fn rational_down(x: &Rational) -> f64 {
    next_down(next_down(x.to_f64().unwrap_or(f64::NEG_INFINITY)))
}

fn rational_up(x: &Rational) -> f64 {
    next_up(next_up(x.to_f64().unwrap_or(f64::INFINITY)))
}

impl Quad {
    pub fn new(a: Rational, b: Rational, d: i64) -> Result<Self, Sl2Error> {
        if !is_square_free(d) {
            return Err(Sl2Error::NotSquareFree { d });
        }
        Ok(Quad { a, b, d })
    }

    fn raw(a: Rational, b: Rational, d: i64) -> Self {
        Quad { a, b, d }
    }

    pub fn rational(q: Rational, d: i64) -> Result<Self, Sl2Error> {
        Quad::new(q, Rational::zero(), d)
    }

    pub fn int(n: i64, d: i64) -> Result<Self, Sl2Error> {
        Quad::rational(Rational::from_integer(BigInt::from(n)), d)
    }

    pub fn sqrt_d(d: i64) -> Result<Self, Sl2Error> {
        Quad::new(Rational::zero(), Rational::one(), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn with(&self, a: Rational, b: Rational) -> Self {
        Quad::raw(a, b, self.d)
    }

    fn check(&self, o: &Quad) {
        assert_eq!(self.d, o.d, "elements of different quadratic fields");
    }

    pub fn add(&self, o: &Quad) -> Quad {
        self.check(o);
        self.with(&self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &Quad) -> Quad {
        self.check(o);
        self.with(&self.a - &o.a, &self.b - &o.b)
    }

    pub fn neg(&self) -> Quad {
        self.with(-&self.a, -&self.b)
    }

    pub fn mul(&self, o: &Quad) -> Quad {
        self.check(o);
        let d = Rational::from_integer(BigInt::from(self.d));
        self.with(
            &self.a * &o.a + &self.b * &o.b * d,
            &self.a * &o.b + &self.b * &o.a,
        )
    }

    pub fn scale(&self, q: &Rational) -> Quad {
        self.with(&self.a * q, &self.b * q)
    }

    /// Galois conjugate `a − b√d`.
    pub fn conj(&self) -> Quad {
        self.with(self.a.clone(), -&self.b)
    }

    /// `a² − d·b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(self.d))
    }

    pub fn inv(&self) -> Option<Quad> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(self.conj().scale(&n.recip()))
    }

    pub fn div(&self, o: &Quad) -> Option<Quad> {
        o.inv().map(|i| self.mul(&i))
    }

    /// Exact sign of the image under `√d ↦ sign·√d`.
    pub fn sign_under(&self, sign: Sign) -> Ordering {
        let a = &self.a;
        let b = match sign {
            Sign::Plus => self.b.clone(),
            Sign::Minus => -&self.b,
        };
        let sa = a.cmp(&Rational::zero());
        let sb = b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with d·b²
        let lhs = a * a;
        let rhs = &b * &b * Rational::from_integer(BigInt::from(self.d));
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Rational enclosure of the image using `√d` to `bits` bits.
    pub fn enclose(&self, sign: Sign, bits: u32) -> (Rational, Rational) {
        if self.b.is_zero() {
            return (self.a.clone(), self.a.clone());
        }
        let (lo, hi) = sqrt_bounds(self.d, bits);
        let c = match sign {
            Sign::Plus => self.b.clone(),
            Sign::Minus => -&self.b,
        };
        if c.is_positive() {
            (&self.a + &c * lo, &self.a + &c * hi)
        } else {
            (&self.a + &c * hi, &self.a + &c * lo)
        }
    }

    /// Outward-rounded f64 enclosure of width at most `tol·max(1, |x|)`.
    ///
    /// Precision doubles from `e.precision` until the width is met and, for
    /// a nonzero element, zero is excluded; the sign then agrees with
    /// [`Quad::sign_under`].
    pub fn interval(&self, e: RealEmbedding, tol: f64) -> Result<Interval, Sl2Error> {
        let exact = self.sign_under(e.sign);
        let mut bits = e.precision.max(8);
        loop {
            let (lo, hi) = self.enclose(e.sign, bits);
            let iv = Interval::new(rational_down(&lo), rational_up(&hi));
            let sign_ok = match exact {
                Ordering::Equal => true,
                Ordering::Greater => iv.lo > 0.0,
                Ordering::Less => iv.hi < 0.0,
            };
            let scale = libm::fabs(iv.mid()).max(1.0);
            if sign_ok && (iv.width() <= tol * scale || lo == hi) {
                return Ok(iv);
            }
            // f64 endpoints stop shrinking long before the rational ones do
            if bits >= 256 && sign_ok {
                return Ok(iv);
            }
            if bits >= MAX_BITS {
                return Err(Sl2Error::Precision { bits });
            }
            bits *= 2;
        }
    }

    /// Parses `p/q`, `sqrtD`, `r*sqrtD` and sums of such terms, e.g. `sqrt2-1`.
    pub fn parse(text: &str, d: i64) -> Result<Quad, Sl2Error> {
        if !is_square_free(d) {
            return Err(Sl2Error::NotSquareFree { d });
        }
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Sl2Error::Parse("empty field element".into()));
        }
        let mut a = Rational::zero();
        let mut b = Rational::zero();
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut i = 1;
        let mut terms = alloc::vec::Vec::new();
        while i <= bytes.len() {
            if i == bytes.len()
                || ((bytes[i] == b'+' || bytes[i] == b'-')
                    && bytes[i - 1] != b'/'
                    && bytes[i - 1] != b'*')
            {
                terms.push(&s[start..i]);
                start = i;
            }
            i += 1;
        }
        for t in terms {
            let (neg, body) = match t.as_bytes()[0] {
                b'-' => (true, &t[1..]),
                b'+' => (false, &t[1..]),
                _ => (false, t),
            };
            let bad = || Sl2Error::Parse(format!("cannot parse term '{t}' in '{text}'"));
            let (coef, irrational) = match body.find("sqrt") {
                Some(pos) => {
                    let radicand = body[pos + 4..]
                        .trim_start_matches('(')
                        .trim_end_matches(')');
                    if radicand.parse::<i64>().map_err(|_| bad())? != d {
                        return Err(Sl2Error::Parse(format!("'{t}' is not in Q(sqrt{d})")));
                    }
                    let c = body[..pos].trim_end_matches('*');
                    let q = if c.is_empty() {
                        Rational::one()
                    } else {
                        Rational::from_str(c).map_err(|_| bad())?
                    };
                    (q, true)
                }
                None => (Rational::from_str(body).map_err(|_| bad())?, false),
            };
            let coef = if neg { -coef } else { coef };
            if irrational {
                b += coef;
            } else {
                a += coef;
            }
        }
        Ok(Quad::raw(a, b, d))
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let mag = self.b.abs();
        let neg = if self.b.is_negative() { "-" } else { "" };
        let sb = if mag.is_one() {
            format!("{neg}sqrt{}", self.d)
        } else {
            format!("{neg}{mag}*sqrt{}", self.d)
        };
        if self.a.is_zero() {
            f.write_str(&sb)
        } else if sb.starts_with('-') {
            write!(f, "{}{}", self.a, sb)
        } else {
            write!(f, "{}+{}", self.a, sb)
        }
    }
}

impl Quad {
    /// JSON-friendly `(a, b)` rendering with `p/q` strings.
    pub fn to_pair(&self) -> (String, String) {
        (self.a.to_string(), self.b.to_string())
    }

    pub fn from_pair(a: &str, b: &str, d: i64) -> Result<Quad, Sl2Error> {
        let p = |s: &str| {
            Rational::from_str(s.trim()).map_err(|_| Sl2Error::Parse(format!("bad rational '{s}'")))
        };
        Quad::new(p(a)?, p(b)?, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Quad {
        Quad::parse(s, 2).unwrap()
    }

    #[test]
    fn square_free() {
        assert!(is_square_free(2) && is_square_free(6) && is_square_free(15));
        assert!(
            !is_square_free(1) && !is_square_free(8) && !is_square_free(18) && !is_square_free(-3)
        );
        assert!(Quad::int(1, 4).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(q("sqrt2-1").to_string(), "-1+sqrt2");
        assert_eq!(q("-1+sqrt(2)"), q("sqrt2-1"));
        assert_eq!(q("3/4 - 1/2*sqrt2").to_string(), "3/4-1/2*sqrt2");
        assert_eq!(q("2sqrt2"), q("sqrt2+sqrt2"));
        assert_eq!(q("7").to_string(), "7");
        assert!(Quad::parse("sqrt3", 2).is_err());
        assert!(Quad::parse("x", 2).is_err());
        assert_eq!(Quad::from_pair("-1", "1", 2).unwrap(), q("sqrt2-1"));
    }

    #[test]
    fn arithmetic() {
        let x = q("sqrt2-1");
        assert_eq!(x.mul(&x), q("3-2sqrt2"));
        assert_eq!(x.mul(&x.inv().unwrap()), q("1"));
        assert_eq!(x.inv().unwrap(), q("sqrt2+1"));
        assert_eq!(x.norm(), Rational::from_integer(BigInt::from(-1)));
        assert!(q("0").inv().is_none());
        assert_eq!(q("sqrt2").mul(&q("sqrt2")), q("2"));
    }

    #[test]
    fn exact_signs() {
        let cases = [
            ("sqrt2-1", Ordering::Greater, Ordering::Less),
            ("3-2sqrt2", Ordering::Greater, Ordering::Greater),
            ("1-sqrt2", Ordering::Less, Ordering::Greater),
            ("0", Ordering::Equal, Ordering::Equal),
            ("-5", Ordering::Less, Ordering::Less),
        ];
        for (s, p, m) in cases {
            assert_eq!(q(s).sign_under(Sign::Plus), p, "{s}");
            assert_eq!(q(s).sign_under(Sign::Minus), m, "{s}");
        }
        // nearly cancelling: 99/70 ≈ √2 from above
        assert_eq!(q("99/70-sqrt2").sign_under(Sign::Plus), Ordering::Greater);
        assert_eq!(q("140/99-sqrt2").sign_under(Sign::Plus), Ordering::Less);
    }

    #[test]
    fn intervals_enclose_and_agree_with_sign() {
        let x = q("sqrt2-1");
        let iv = x.interval(RealEmbedding::PLUS, 1e-15).unwrap();
        assert!(
            iv.lo <= core::f64::consts::SQRT_2 - 1.0 + 1e-16
                && iv.hi >= core::f64::consts::SQRT_2 - 1.0 - 1e-16
        );
        let iv = x.interval(RealEmbedding::MINUS, 1e-12).unwrap();
        assert!(iv.hi < 0.0 && (iv.mid() + core::f64::consts::SQRT_2 + 1.0).abs() < 1e-12);
        // tiny but nonzero: precision has to escalate past 64 bits
        let tiny = q("665857/470832-sqrt2");
        let iv = tiny
            .interval(
                RealEmbedding {
                    sign: Sign::Plus,
                    precision: 8,
                },
                1e-3,
            )
            .unwrap();
        assert!(iv.lo > 0.0);
        let z = q("0").interval(RealEmbedding::PLUS, 1e-12).unwrap();
        assert!(z.contains(0.0));
    }
}
