use std::fmt;

use num_rational::BigRational;

use super::coeff::CoeffPoly;
use super::param::{Param, ParamPoly};
use super::rational::{int, rat};
use crate::error::{Error, Result};

/// Expansion variable of a [`TruncSeries`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesVar {
    /// The Maclaurin variable `s`.
    S,
    /// `u^{-2}`, the variable of the large-`u` expansions.
    InvU2,
    /// The generating-function variable `t`.
    T,
}

impl fmt::Display for SeriesVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesVar::S => "s",
            SeriesVar::InvU2 => "u^-2",
            SeriesVar::T => "t",
        })
    }
}

/// A power series truncated after `var^order`, with [`CoeffPoly`]
/// coefficients. All arithmetic is exact modulo `var^(order+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    var: SeriesVar,
    param: Param,
    coeffs: Vec<CoeffPoly>,
}

impl TruncSeries {
    /// Pads with zeros or truncates `coeffs` to length `order + 1`.
    pub fn new(var: SeriesVar, param: Param, mut coeffs: Vec<CoeffPoly>, order: usize) -> Self {
        coeffs.resize_with(order + 1, || CoeffPoly::zero(param));
        TruncSeries { var, param, coeffs }
    }

    pub fn zero(var: SeriesVar, param: Param, order: usize) -> Self {
        Self::new(var, param, Vec::new(), order)
    }

    pub fn one(var: SeriesVar, param: Param, order: usize) -> Self {
        Self::new(var, param, vec![CoeffPoly::one(param)], order)
    }

    /// A series with rational coefficients.
    pub fn from_rationals(
        var: SeriesVar,
        param: Param,
        coeffs: Vec<BigRational>,
        order: usize,
    ) -> Self {
        let coeffs = coeffs
            .into_iter()
            .map(|c| CoeffPoly::constant(ParamPoly::constant(param, c)))
            .collect();
        Self::new(var, param, coeffs, order)
    }

    pub fn var(&self) -> SeriesVar {
        self.var
    }

    pub fn param(&self) -> Param {
        self.param
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CoeffPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &CoeffPoly {
        &self.coeffs[n]
    }

    pub fn into_coeffs(self) -> Vec<CoeffPoly> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "truncate cannot raise the order");
        Self::new(self.var, self.param, self.coeffs[..=order].to_vec(), order)
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.var, other.var, "series in different variables");
        assert_eq!(self.order(), other.order(), "series of different orders");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.var, self.param, coeffs, self.order())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Self::new(self.var, self.param, coeffs, self.order())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let order = self.order();
        let mut out = vec![CoeffPoly::zero(self.param); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Self::new(self.var, self.param, out, order)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.scale(c)).collect();
        Self::new(self.var, self.param, coeffs, self.order())
    }

    pub fn mul_coeff(&self, c: &CoeffPoly) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Self::new(self.var, self.param, coeffs, self.order())
    }

    /// Divides by the series variable; the constant coefficient must vanish.
    /// The order drops by one.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NotDivisible(format!(
                "series in {} has a nonzero constant term",
                self.var
            )));
        }
        if self.order() == 0 {
            return Err(Error::NotDivisible("cannot shift an order-0 series".into()));
        }
        Ok(Self::new(
            self.var,
            self.param,
            self.coeffs[1..].to_vec(),
            self.order() - 1,
        ))
    }

    /// `exp(self)` for a series with zero constant term, from `nE_n = Σ k G_k E_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("exp needs a zero constant term".into()));
        }
        let order = self.order();
        let mut e: Vec<CoeffPoly> = Vec::with_capacity(order + 1);
        e.push(CoeffPoly::one(self.param));
        for n in 1..=order {
            let mut acc = CoeffPoly::zero(self.param);
            for k in 1..=n {
                if self.coeffs[k].is_zero() || e[n - k].is_zero() {
                    continue;
                }
                acc = &acc + &(&self.coeffs[k] * &e[n - k]).scale(&int(k as i64));
            }
            e.push(acc.scale(&rat(1, n as i64)));
        }
        Ok(Self::new(self.var, self.param, e, order))
    }

    /// `log(self)` for a unit series, from `nL_n = nP_n - Σ_{k<n} k L_k P_{n-k}`.
    pub fn log(&self) -> Result<Self> {
        self.require_unit()?;
        let order = self.order();
        let mut l: Vec<CoeffPoly> = vec![CoeffPoly::zero(self.param)];
        for n in 1..=order {
            let mut acc = self.coeffs[n].scale(&int(n as i64));
            for (k, l_k) in l.iter().enumerate().take(n).skip(1) {
                if l_k.is_zero() || self.coeffs[n - k].is_zero() {
                    continue;
                }
                acc = &acc - &(l_k * &self.coeffs[n - k]).scale(&int(k as i64));
            }
            l.push(acc.scale(&rat(1, n as i64)));
        }
        Ok(Self::new(self.var, self.param, l, order))
    }

    /// Multiplicative inverse of a unit series.
    pub fn reciprocal(&self) -> Result<Self> {
        self.require_unit()?;
        let order = self.order();
        let mut q: Vec<CoeffPoly> = vec![CoeffPoly::one(self.param)];
        for n in 1..=order {
            let mut acc = CoeffPoly::zero(self.param);
            for k in 1..=n {
                if !self.coeffs[k].is_zero() && !q[n - k].is_zero() {
                    acc = &acc - &(&self.coeffs[k] * &q[n - k]);
                }
            }
            q.push(acc);
        }
        Ok(Self::new(self.var, self.param, q, order))
    }

    /// `self^exponent = exp(exponent · log self)` for a unit series and a
    /// formal exponent.
    pub fn pow_param(&self, exponent: &ParamPoly) -> Result<Self> {
        let log = self.log()?;
        let scaled = Self::new(
            self.var,
            exponent.param(),
            log.coeffs
                .iter()
                .map(|c| {
                    c.substitute_param(&ParamPoly::var(exponent.param()))
                        .mul_param(exponent)
                })
                .collect(),
            self.order(),
        );
        scaled.exp()
    }

    fn require_unit(&self) -> Result<()> {
        if self.coeffs[0].is_one() {
            Ok(())
        } else {
            Err(Error::NotUnit(self.coeffs[0].to_string()))
        }
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, c) in self.coeffs.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "[{c}]*{}^{n}", self.var)?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}
