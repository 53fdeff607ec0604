use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

/// Largest `|logmag|` for which [`LogComplex::to_complex`] converts.
pub const NATIVE_LOG_LIMIT: f64 = 700.0;

/// `exp(logmag + i·phase)`, or zero when `logmag` is `-∞`.
///
/// Values of any magnitude travel this way; multiplication adds fields.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex {
    pub logmag: f64,
    pub phase: f64,
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = (x + PI).rem_euclid(2.0 * PI) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        logmag: f64::NEG_INFINITY,
        phase: 0.0,
    };
    pub const ONE: LogComplex = LogComplex {
        logmag: 0.0,
        phase: 0.0,
    };

    pub fn new(logmag: f64, phase: f64) -> Self {
        LogComplex { logmag, phase }
    }

    /// `exp(l)` for a complex logarithm `l`.
    pub fn exp(l: Complex64) -> Self {
        LogComplex {
            logmag: l.re,
            phase: l.im,
        }
    }

    pub fn from_complex(c: Complex64) -> Self {
        if c.re == 0.0 && c.im == 0.0 {
            Self::ZERO
        } else {
            LogComplex {
                logmag: c.norm().ln(),
                phase: c.arg(),
            }
        }
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.logmag == f64::NEG_INFINITY
    }

    pub fn is_finite(&self) -> bool {
        self.is_zero() || (self.logmag.is_finite() && self.phase.is_finite())
    }

    /// The logarithm `logmag + i·phase` with unrestricted phase.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.logmag, self.phase)
    }

    /// The native value, when its magnitude is representable.
    pub fn to_complex(&self) -> Option<Complex64> {
        if self.is_zero() {
            return Some(Complex64::new(0.0, 0.0));
        }
        if self.logmag.abs() >= NATIVE_LOG_LIMIT {
            return None;
        }
        Some(Complex64::from_polar(self.logmag.exp(), self.phase))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::ZERO;
        }
        LogComplex {
            logmag: self.logmag + o.logmag,
            phase: self.phase + o.phase,
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by a zero LogComplex");
        if self.is_zero() {
            return Self::ZERO;
        }
        LogComplex {
            logmag: self.logmag - o.logmag,
            phase: self.phase - o.phase,
        }
    }

    pub fn mul_complex(&self, c: Complex64) -> Self {
        self.mul(&Self::from_complex(c))
    }

    /// Multiplies by `exp(l)`.
    pub fn mul_exp(&self, l: Complex64) -> Self {
        self.mul(&Self::exp(l))
    }

    pub fn neg(&self) -> Self {
        LogComplex {
            logmag: self.logmag,
            phase: self.phase + PI,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        let (big, small) = if self.logmag >= o.logmag {
            (self, o)
        } else {
            (o, self)
        };
        let r = Complex64::from_polar(
            (small.logmag - big.logmag).exp(),
            wrap_phase(small.phase - big.phase),
        );
        let s = Complex64::new(1.0, 0.0) + r;
        if s.re == 0.0 && s.im == 0.0 {
            return Self::ZERO;
        }
        LogComplex {
            logmag: big.logmag + s.norm().ln(),
            phase: big.phase + s.arg(),
        }
    }

    /// Subtraction without the rounding of a half-turn phase, so equal
    /// values cancel exactly.
    pub fn sub(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.neg();
        }
        if o.is_zero() {
            return *self;
        }
        if self.logmag >= o.logmag {
            // self − o = −self·(o/self − 1)
            let e = exp_m1_complex(o.logmag - self.logmag, wrap_phase(o.phase - self.phase));
            Self::scaled(self, e).neg()
        } else {
            // self − o = o·(self/o − 1)
            let e = exp_m1_complex(self.logmag - o.logmag, wrap_phase(self.phase - o.phase));
            Self::scaled(o, e)
        }
    }

    fn scaled(base: &Self, f: Complex64) -> Self {
        if f.re == 0.0 && f.im == 0.0 {
            return Self::ZERO;
        }
        LogComplex {
            logmag: base.logmag + f.norm().ln(),
            phase: base.phase + f.arg(),
        }
    }

    /// `|self/other - 1|`, computed from the log difference.
    pub fn rel_discrepancy(&self, other: &Self) -> f64 {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return 0.0,
            (false, true) => return f64::INFINITY,
            (true, false) => return 1.0,
            _ => {}
        }
        exp_m1_complex(
            self.logmag - other.logmag,
            wrap_phase(self.phase - other.phase),
        )
        .norm()
    }

    /// Phase reduced to `(-π, π]`.
    pub fn principal(&self) -> Self {
        LogComplex {
            logmag: self.logmag,
            phase: wrap_phase(self.phase),
        }
    }
}

impl fmt::Display for LogComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({:.17e} + {:.17e}i)", self.logmag, self.phase)
    }
}

/// `exp(dx + i·dy) - 1` without cancellation for small arguments.
fn exp_m1_complex(dx: f64, dy: f64) -> Complex64 {
    let half = (0.5 * dy).sin();
    Complex64::new(
        dx.exp_m1() * dy.cos() - 2.0 * half * half,
        dx.exp() * dy.sin(),
    )
}

/// Sum of several values, accumulated in log space.
pub fn sum<'a>(terms: impl IntoIterator<Item = &'a LogComplex>) -> LogComplex {
    terms
        .into_iter()
        .fold(LogComplex::ZERO, |acc, t| acc.add(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survives_overflowing_magnitudes() {
        let big = LogComplex::new(1000.0, 0.3);
        let prod = big.mul(&big);
        assert_eq!(prod.logmag, 2000.0);
        assert!(big.to_complex().is_none());
        let s = big.add(&big);
        assert!((s.logmag - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn zero_sentinel() {
        let z = LogComplex::ZERO;
        assert!(z.is_zero());
        assert_eq!(z.add(&LogComplex::ONE), LogComplex::ONE);
        assert!(z.mul(&LogComplex::new(5.0, 1.0)).is_zero());
        assert_eq!(z.to_complex(), Some(Complex64::new(0.0, 0.0)));
        let one = LogComplex::ONE;
        assert!(one.sub(&one).is_zero());
    }

    #[test]
    fn discrepancy_matches_direct_formula() {
        let a = Complex64::new(1.0, 2.0);
        let b = Complex64::new(1.0 + 1e-9, 2.0);
        let d = LogComplex::from_complex(a).rel_discrepancy(&LogComplex::from_complex(b));
        assert!((d / (a / b - 1.0).norm() - 1.0).abs() < 1e-6);
        // Full turns of phase do not register.
        let c = LogComplex::new(0.5, 0.1);
        let c2 = LogComplex::new(0.5, 0.1 + 4.0 * PI);
        assert!(c.rel_discrepancy(&c2) < 1e-14);
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI + 0.25) - (-PI + 0.25)).abs() < 1e-14);
    }
}
