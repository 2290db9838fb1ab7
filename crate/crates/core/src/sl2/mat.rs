use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::quad::Quad;
use super::Sl2Error;
use crate::group::{Group, ParseError};

/// `[[a, b], [c, d]]` with determinant exactly 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat2 {
    a: Quad,
    b: Quad,
    c: Quad,
    d: Quad,
}

impl Mat2 {
    pub fn new(a: Quad, b: Quad, c: Quad, d: Quad) -> Result<Self, Sl2Error> {
        let f = a.d();
        for e in [&b, &c, &d] {
            if e.d() != f {
                return Err(Sl2Error::FieldMismatch {
                    left: f,
                    right: e.d(),
                });
            }
        }
        let m = Mat2 { a, b, c, d };
        let det = m.det();
        if det != Quad::int(1, f)? {
            return Err(Sl2Error::Determinant(format!("{det}")));
        }
        Ok(m)
    }

    pub fn from_ints(field: i64, e: [i64; 4]) -> Result<Self, Sl2Error> {
        Mat2::new(
            Quad::int(e[0], field)?,
            Quad::int(e[1], field)?,
            Quad::int(e[2], field)?,
            Quad::int(e[3], field)?,
        )
    }

    pub fn identity(field: i64) -> Result<Self, Sl2Error> {
        Mat2::from_ints(field, [1, 0, 0, 1])
    }

    pub fn field(&self) -> i64 {
        self.a.d()
    }

    pub fn entries(&self) -> [&Quad; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> Quad {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn trace(&self) -> Quad {
        self.a.add(&self.d)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    pub fn inverse(&self) -> Mat2 {
        Mat2 {
            a: self.d.clone(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a.clone(),
        }
    }

    pub fn pow(&self, n: i64) -> Mat2 {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut k = n.unsigned_abs();
        let one = Quad::int(1, self.field()).expect("field already validated");
        let zero = one.sub(&one);
        let mut acc = Mat2 {
            a: one.clone(),
            b: zero.clone(),
            c: zero,
            d: one,
        };
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// `A·i = x + iy` as exact field elements, `y = 1/(c² + d²)`.
    pub fn mobius_i(&self) -> (Quad, Quad) {
        let den = self.c.mul(&self.c).add(&self.d.mul(&self.d));
        // c² + d² is positive under every real embedding when det = 1
        let inv = den.inv().expect("c and d vanish together only off SL2");
        (self.a.mul(&self.c).add(&self.b.mul(&self.d)).mul(&inv), inv)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// `SL2(ℚ(√d))` as a [`Group`], elements parsed as `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sl2Group {
    d: i64,
}

impl Sl2Group {
    pub fn new(d: i64) -> Result<Self, Sl2Error> {
        Quad::int(0, d)?;
        Ok(Sl2Group { d })
    }

    pub fn field(&self) -> i64 {
        self.d
    }

    pub fn parse_matrix(&self, text: &str) -> Result<Mat2, Sl2Error> {
        let s: String = text
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '[' && *c != ']')
            .collect();
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(Sl2Error::Parse(format!(
                "expected four entries in '{text}'"
            )));
        }
        let e: Result<Vec<Quad>, _> = parts.iter().map(|p| Quad::parse(p, self.d)).collect();
        let mut e = e?.into_iter();
        let mut next = || e.next().expect("four entries");
        Mat2::new(next(), next(), next(), next())
    }
}

impl Group for Sl2Group {
    type Element = Mat2;

    fn identity(&self) -> Mat2 {
        Mat2::identity(self.d).expect("field already validated")
    }

    fn multiply(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        a.mul(b)
    }

    fn invert(&self, a: &Mat2) -> Mat2 {
        a.inverse()
    }

    fn pow(&self, a: &Mat2, n: i64) -> Mat2 {
        a.pow(n)
    }

    fn parse(&self, text: &str) -> Result<Mat2, ParseError> {
        self.parse_matrix(text)
            .map_err(|e| ParseError::new(0, format!("{e}")))
    }

    fn render(&self, a: &Mat2) -> String {
        format!("{a}")
    }
}
