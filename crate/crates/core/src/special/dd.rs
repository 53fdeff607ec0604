//! Double-double arithmetic: an unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn scale(self, s: f64) -> Self {
        self * DoubleDouble::new(s)
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble::new(x)
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    fn add(self, y: Self) -> Self {
        let (s, e) = two_sum(self.hi, y.hi);
        let (t, f) = two_sum(self.lo, y.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    fn sub(self, y: Self) -> Self {
        self + (-y)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, y: Self) -> Self {
        let (p, e) = two_prod(self.hi, y.hi);
        let e = e + (self.hi * y.lo + self.lo * y.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;

    fn div(self, y: Self) -> Self {
        let q1 = self.hi / y.hi;
        let r = self - y * DoubleDouble::new(q1);
        let q2 = r.hi / y.hi;
        let r = r - y * DoubleDouble::new(q2);
        let q3 = r.hi / y.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::new(q3)
    }
}

/// A complex number with double-double parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DdComplex {
    pub re: DoubleDouble,
    pub im: DoubleDouble,
}

impl DdComplex {
    pub fn new(re: f64, im: f64) -> Self {
        DdComplex {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn from_c64(c: Complex64) -> Self {
        Self::new(c.re, c.im)
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm(self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }

    pub fn scale(self, s: f64) -> Self {
        DdComplex {
            re: self.re.scale(s),
            im: self.im.scale(s),
        }
    }
}

impl Add for DdComplex {
    type Output = Self;

    fn add(self, y: Self) -> Self {
        DdComplex {
            re: self.re + y.re,
            im: self.im + y.im,
        }
    }
}

impl Sub for DdComplex {
    type Output = Self;

    fn sub(self, y: Self) -> Self {
        DdComplex {
            re: self.re - y.re,
            im: self.im - y.im,
        }
    }
}

impl Neg for DdComplex {
    type Output = Self;

    fn neg(self) -> Self {
        DdComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for DdComplex {
    type Output = Self;

    fn mul(self, y: Self) -> Self {
        DdComplex {
            re: self.re * y.re - self.im * y.im,
            im: self.re * y.im + self.im * y.re,
        }
    }
}

impl Div for DdComplex {
    type Output = Self;

    fn div(self, y: Self) -> Self {
        // Scale the divisor to unit size first so the squared norm cannot overflow.
        let s = y.norm();
        let (y, x) = (y.scale(1.0 / s), self.scale(1.0 / s));
        let den = y.re * y.re + y.im * y.im;
        DdComplex {
            re: (x.re * y.re + x.im * y.im) / den,
            im: (x.im * y.re - x.re * y.im) / den,
        }
    }
}
