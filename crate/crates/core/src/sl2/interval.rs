//! Closed f64 intervals with outward rounding.
//!
//! Elementary operations are rounded outward by one ulp; libm results for
//! `sqrt` and `asinh` are padded by [`PAD_ULPS`], which exceeds their
//! documented error.

/// Outward padding applied around libm transcendental results.
pub const PAD_ULPS: u32 = 4;

pub fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    if x > 0.0 {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

pub fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

fn pad(x: f64, n: u32, up: bool) -> f64 {
    (0..n).fold(x, |v, _| if up { next_up(v) } else { next_down(v) })
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn mid(&self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(next_down(self.lo + o.lo), next_up(self.hi + o.hi))
    }

    /// Multiplication by a positive constant.
    pub fn scale(&self, k: f64) -> Interval {
        debug_assert!(k >= 0.0);
        Interval::new(next_down(self.lo * k), next_up(self.hi * k))
    }

    /// Square root, with the negative part clipped to zero.
    pub fn sqrt(&self) -> Interval {
        let lo = if self.lo <= 0.0 {
            0.0
        } else {
            pad(libm::sqrt(self.lo), PAD_ULPS, false).max(0.0)
        };
        Interval::new(lo, pad(libm::sqrt(self.hi.max(0.0)), PAD_ULPS, true))
    }

    pub fn asinh(&self) -> Interval {
        let lo = pad(libm::asinh(self.lo), PAD_ULPS, false);
        let lo = if self.lo >= 0.0 { lo.max(0.0) } else { lo };
        Interval::new(lo, pad(libm::asinh(self.hi), PAD_ULPS, true))
    }
}
