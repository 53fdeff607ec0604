use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;

use super::dd::DdComplex;
use super::logc::LogComplex;
use crate::error::{Error, Result};

/// Environment variable that overrides the default precision mode.
pub const PRECISION_ENV: &str = "KUMMER_ASYM_PRECISION";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Double,
    DoubleDouble,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Double => "double",
            Mode::DoubleDouble => "dd",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double" => Ok(Mode::Double),
            "dd" | "double-double" => Ok(Mode::DoubleDouble),
            _ => Err(Error::Parse(format!(
                "unknown precision mode {s:?} (expected double or dd)"
            ))),
        }
    }
}

/// Arithmetic mode and tolerances shared by the kernels.
///
/// `accuracy_target` is the headroom rule: a series whose cancellation
/// factor times the unit roundoff of the mode exceeds it is rejected.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Precision {
    pub mode: Mode,
    pub series_tol: f64,
    pub quad_tol: f64,
    pub accuracy_target: f64,
}

impl Precision {
    pub fn double() -> Self {
        Precision {
            mode: Mode::Double,
            series_tol: 1e-17,
            quad_tol: 1e-13,
            accuracy_target: 1e-10,
        }
    }

    pub fn double_double() -> Self {
        Precision {
            mode: Mode::DoubleDouble,
            series_tol: 1e-22,
            quad_tol: 1e-14,
            accuracy_target: 1e-16,
        }
    }

    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Double => Self::double(),
            Mode::DoubleDouble => Self::double_double(),
        }
    }

    /// `default_mode` unless the environment variable says otherwise.
    pub fn from_env(default_mode: Mode) -> Result<Self> {
        match std::env::var(PRECISION_ENV) {
            Ok(v) => Ok(Self::for_mode(v.parse()?)),
            Err(_) => Ok(Self::for_mode(default_mode)),
        }
    }

    /// Natural log of the largest cancellation factor a series may suffer.
    pub fn cancellation_budget(&self) -> f64 {
        let ulp = match self.mode {
            Mode::Double => Complex64::UNIT_ROUNDOFF,
            Mode::DoubleDouble => DdComplex::UNIT_ROUNDOFF,
        };
        (self.accuracy_target / ulp).ln()
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::double_double()
    }
}

/// Complex scalars the series kernels can run in.
pub trait SeriesScalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    const UNIT_ROUNDOFF: f64;
    fn from_c64(c: Complex64) -> Self;
    fn to_c64(self) -> Complex64;
    fn magnitude(self) -> f64;
    fn scale(self, s: f64) -> Self;

    fn real(x: f64) -> Self {
        Self::from_c64(Complex64::new(x, 0.0))
    }
}

impl SeriesScalar for Complex64 {
    const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

    fn from_c64(c: Complex64) -> Self {
        c
    }

    fn to_c64(self) -> Complex64 {
        self
    }

    fn magnitude(self) -> f64 {
        self.norm()
    }

    fn scale(self, s: f64) -> Self {
        self * s
    }
}

impl SeriesScalar for DdComplex {
    const UNIT_ROUNDOFF: f64 = 1.0 / (1u128 << 105) as f64;

    fn from_c64(c: Complex64) -> Self {
        DdComplex::from_c64(c)
    }

    fn to_c64(self) -> Complex64 {
        DdComplex::to_c64(self)
    }

    fn magnitude(self) -> f64 {
        self.norm()
    }

    fn scale(self, s: f64) -> Self {
        DdComplex::scale(self, s)
    }
}

/// Result of a ratio-driven series summation.
#[derive(Clone, Copy, Debug)]
pub struct SeriesSum {
    pub value: LogComplex,
    /// `ln(max |term| / |sum|)`.
    pub cancellation: f64,
    pub terms: usize,
}

const RESCALE_AT: f64 = 1e200;
const MAX_TERMS: usize = 200_000;

/// Sums `Σ t_k` with `t_0 = 1`, `t_{k+1} = t_k · ratio(k)`, rescaling to
/// stay inside the native exponent range. Stops once a term is below
/// `prec.series_tol` relative to the sum while the ratio is at most ½, so
/// the tail is bounded by twice the last term.
pub fn sum_ratio_series<T: SeriesScalar>(
    kernel: &'static str,
    prec: &Precision,
    mut ratio: impl FnMut(usize) -> T,
) -> Result<SeriesSum> {
    let mut term = T::real(1.0);
    let mut total = term;
    let mut log_scale = 0.0f64;
    let mut max_log = 0.0f64;
    let mut terms = 1;
    loop {
        if terms > MAX_TERMS {
            return Err(Error::PrecisionExhausted {
                kernel,
                detail: format!("no convergence after {MAX_TERMS} terms"),
            });
        }
        let r = ratio(terms - 1);
        term = term * r;
        terms += 1;
        let tn = term.magnitude();
        if tn == 0.0 {
            break;
        }
        if !tn.is_finite() {
            return Err(Error::PrecisionExhausted {
                kernel,
                detail: "non-finite term".into(),
            });
        }
        total = total + term;
        max_log = max_log.max(tn.ln() + log_scale);
        if tn > RESCALE_AT {
            term = term.scale(1.0 / RESCALE_AT);
            total = total.scale(1.0 / RESCALE_AT);
            log_scale += RESCALE_AT.ln();
        }
        if term.magnitude() <= prec.series_tol * total.magnitude() && r.magnitude() <= 0.5 {
            break;
        }
    }
    let value = LogComplex::from_complex(total.to_c64()).mul_exp(Complex64::new(log_scale, 0.0));
    let cancellation = if value.is_zero() {
        f64::INFINITY
    } else {
        max_log - value.logmag
    };
    let sum = SeriesSum {
        value,
        cancellation,
        terms,
    };
    let budget = (prec.accuracy_target / T::UNIT_ROUNDOFF).ln();
    if sum.cancellation > budget {
        return Err(Error::PrecisionExhausted {
            kernel,
            detail: format!(
                "cancellation factor e^{:.1} exceeds the budget e^{:.1} of the precision mode",
                sum.cancellation, budget
            ),
        });
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_series_in_both_modes() {
        let x = Complex64::new(3.0, 0.0);
        for prec in [Precision::double(), Precision::double_double()] {
            let s = match prec.mode {
                Mode::Double => {
                    sum_ratio_series("test", &prec, |k| x / Complex64::new(k as f64 + 1.0, 0.0))
                }
                Mode::DoubleDouble => sum_ratio_series("test", &prec, |k| {
                    DdComplex::from_c64(x) / DdComplex::new(k as f64 + 1.0, 0.0)
                }),
            }
            .unwrap();
            assert!((s.value.logmag - 3.0).abs() < 1e-15);
            assert!(s.cancellation <= 1e-12);
        }
    }

    #[test]
    fn cancellation_budget_enforced() {
        // e^{-40} by its Maclaurin series cancels by about e^{80}.
        let x = -40.0;
        let dbl = Precision::double();
        let err = sum_ratio_series("test", &dbl, |k| Complex64::new(x / (k as f64 + 1.0), 0.0));
        assert!(matches!(err, Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn rescaling_handles_huge_terms() {
        // e^{800} overflows f64 but not the rescaled sum.
        let prec = Precision::double();
        let s = sum_ratio_series("test", &prec, |k| {
            Complex64::new(800.0 / (k as f64 + 1.0), 0.0)
        })
        .unwrap();
        assert!((s.value.logmag - 800.0).abs() < 1e-12);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("dd".parse::<Mode>().unwrap(), Mode::DoubleDouble);
        assert_eq!("double".parse::<Mode>().unwrap(), Mode::Double);
        assert!("quad".parse::<Mode>().is_err());
    }
}
