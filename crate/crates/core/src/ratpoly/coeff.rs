use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::param::{param_poly_from_json, Param, ParamPoly};
use super::rational::int;
use crate::error::{Error, Result};

/// Declared symmetry of a [`CoeffPoly`] under `z ↦ -z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            Parity::None => Parity::None,
        }
    }

    fn admits_degree(self, k: usize) -> bool {
        match self {
            Parity::Even => k.is_multiple_of(2),
            Parity::Odd => k % 2 == 1,
            Parity::None => true,
        }
    }

    fn of_product(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::None, _) | (_, Parity::None) => Parity::None,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }
}

/// A polynomial in `z` whose coefficients are [`ParamPoly`] values.
///
/// The declared parity is checked on construction: an even polynomial never
/// stores a nonzero odd-degree coefficient, and vice versa. Equality ignores
/// the declared parity and compares coefficients only.
#[derive(Clone, Debug)]
pub struct CoeffPoly {
    param: Param,
    coeffs: Vec<ParamPoly>,
    parity: Parity,
}

impl CoeffPoly {
    pub fn new(param: Param, coeffs: Vec<ParamPoly>, parity: Parity) -> Result<Self> {
        let p = Self::normalized(param, coeffs, Parity::None);
        p.with_parity(parity)
    }

    fn normalized(param: Param, mut coeffs: Vec<ParamPoly>, parity: Parity) -> Self {
        while coeffs.last().is_some_and(ParamPoly::is_zero) {
            coeffs.pop();
        }
        let coeffs = coeffs
            .into_iter()
            .map(|c| c.with_param_if_constant(param))
            .collect();
        CoeffPoly {
            param,
            coeffs,
            parity,
        }
    }

    pub fn zero(param: Param) -> Self {
        CoeffPoly {
            param,
            coeffs: Vec::new(),
            parity: Parity::Even,
        }
    }

    pub fn one(param: Param) -> Self {
        Self::constant(ParamPoly::one(param))
    }

    pub fn constant(c: ParamPoly) -> Self {
        let param = c.param();
        Self::normalized(param, vec![c], Parity::Even)
    }

    /// `c · z^degree`.
    pub fn monomial(c: ParamPoly, degree: usize) -> Self {
        let param = c.param();
        let mut coeffs = vec![ParamPoly::zero(param); degree];
        coeffs.push(c);
        let parity = if degree.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        };
        Self::normalized(param, coeffs, parity)
    }

    /// Builds a parameter-free polynomial from rational z-coefficients.
    pub fn from_rationals(param: Param, coeffs: Vec<BigRational>, parity: Parity) -> Result<Self> {
        Self::new(
            param,
            coeffs
                .into_iter()
                .map(|c| ParamPoly::constant(param, c))
                .collect(),
            parity,
        )
    }

    pub fn param(&self) -> Param {
        self.param
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn coeffs(&self) -> &[ParamPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ParamPoly {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| ParamPoly::zero(self.param))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Value at `z = 0`.
    pub fn at_zero(&self) -> ParamPoly {
        self.coeff(0)
    }

    /// Re-declares the parity, failing if a coefficient contradicts it.
    pub fn with_parity(mut self, parity: Parity) -> Result<Self> {
        if let Some((k, _)) = self
            .coeffs
            .iter()
            .enumerate()
            .find(|(k, c)| !c.is_zero() && !parity.admits_degree(*k))
        {
            return Err(Error::ParityViolation(format!(
                "declared {parity:?} but z^{k} has a nonzero coefficient"
            )));
        }
        self.parity = parity;
        Ok(self)
    }

    /// Parity actually exhibited by the stored coefficients.
    pub fn observed_parity(&self) -> Parity {
        let has = |odd: bool| {
            self.coeffs
                .iter()
                .enumerate()
                .any(|(k, c)| !c.is_zero() && (k % 2 == 1) == odd)
        };
        match (has(false), has(true)) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::None,
        }
    }

    fn sum_parity(&self, other: &Self) -> Parity {
        if self.is_zero() {
            other.parity
        } else if other.is_zero() || self.parity == other.parity {
            self.parity
        } else {
            Parity::None
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::normalized(
            self.param,
            self.coeffs.iter().map(|x| x.scale(c)).collect(),
            self.parity,
        )
    }

    pub fn mul_param(&self, c: &ParamPoly) -> Self {
        Self::normalized(
            self.param,
            self.coeffs.iter().map(|x| x * c).collect(),
            self.parity,
        )
    }

    pub fn derivative(&self) -> Self {
        Self::normalized(
            self.param,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&int(k as i64)))
                .collect(),
            self.parity.flip(),
        )
    }

    /// The antiderivative vanishing at `z = 0`.
    pub fn integrate_from_zero(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ParamPoly::zero(self.param));
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&BigRational::new(1.into(), (k as i64 + 1).into())));
        }
        Self::normalized(self.param, coeffs, self.parity.flip())
    }

    /// Exact `p / z`; the constant term must vanish.
    pub fn divide_by_z(&self) -> Result<Self> {
        match self.coeffs.first() {
            None => Ok(Self::zero(self.param).with_parity(self.parity.flip())?),
            Some(c0) if !c0.is_zero() => Err(Error::NotDivisible(format!(
                "constant term {c0} prevents division by z"
            ))),
            Some(_) => Ok(Self::normalized(
                self.param,
                self.coeffs[1..].to_vec(),
                self.parity.flip(),
            )),
        }
    }

    /// Replaces the formal parameter in every coefficient by `image`.
    pub fn substitute_param(&self, image: &ParamPoly) -> Self {
        Self::normalized(
            image.param(),
            self.coeffs.iter().map(|c| c.substitute(image)).collect(),
            self.parity,
        )
    }

    /// Horner evaluation in both variables; rationals become doubles at the
    /// last step.
    pub fn evaluate(&self, param_value: Complex64, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| {
                acc * z + c.eval_complex(param_value)
            })
    }

    /// Exact evaluation at a rational `z`, leaving a parameter polynomial.
    pub fn eval_z_rational(&self, z: &BigRational) -> ParamPoly {
        let zc = ParamPoly::constant(self.param, z.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(ParamPoly::zero(self.param), |acc, c| &(&acc * &zc) + c)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("coefficient polynomial serializes")
    }

    pub fn from_json(param: Param, parity: Parity, v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("z-polynomial must be an array".into()))?;
        let coeffs = arr
            .iter()
            .map(|c| param_poly_from_json(param, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(param, coeffs, parity)
    }
}

impl PartialEq for CoeffPoly {
    fn eq(&self, other: &Self) -> bool {
        self.param == other.param && self.coeffs == other.coeffs
    }
}

impl Eq for CoeffPoly {}

impl Serialize for CoeffPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl Add for &CoeffPoly {
    type Output = CoeffPoly;

    fn add(self, rhs: &CoeffPoly) -> CoeffPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CoeffPoly::normalized(
            self.param,
            (0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect(),
            self.sum_parity(rhs),
        )
    }
}

impl Sub for &CoeffPoly {
    type Output = CoeffPoly;

    fn sub(self, rhs: &CoeffPoly) -> CoeffPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CoeffPoly::normalized(
            self.param,
            (0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect(),
            self.sum_parity(rhs),
        )
    }
}

impl Mul for &CoeffPoly {
    type Output = CoeffPoly;

    fn mul(self, rhs: &CoeffPoly) -> CoeffPoly {
        let parity = self.parity.of_product(rhs.parity);
        if self.is_zero() || rhs.is_zero() {
            return CoeffPoly::zero(self.param);
        }
        let mut out = vec![ParamPoly::zero(self.param); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        CoeffPoly::normalized(self.param, out, parity)
    }
}

impl Neg for &CoeffPoly {
    type Output = CoeffPoly;

    fn neg(self) -> CoeffPoly {
        CoeffPoly::normalized(
            self.param,
            self.coeffs.iter().map(|c| -c).collect(),
            self.parity,
        )
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{k}")?,
            }
        }
        Ok(())
    }
}

/// `z`, as an odd polynomial.
pub fn z_poly(param: Param) -> CoeffPoly {
    CoeffPoly::monomial(ParamPoly::one(param), 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rational::rat;

    fn mu() -> ParamPoly {
        ParamPoly::var(Param::Mu)
    }

    fn c(q: BigRational) -> ParamPoly {
        ParamPoly::constant(Param::Mu, q)
    }

    #[test]
    fn integrate_power_rule() {
        let z2 = CoeffPoly::monomial(ParamPoly::one(Param::Mu), 2);
        let expect = CoeffPoly::monomial(c(rat(1, 3)), 3);
        let got = z2.integrate_from_zero();
        assert_eq!(got, expect);
        assert_eq!(got.parity(), Parity::Odd);
        assert!(CoeffPoly::zero(Param::Mu).integrate_from_zero().is_zero());
    }

    #[test]
    fn integrate_param_coefficient() {
        // (2μ+1)·z → (2μ+1)·z²/2
        let two_mu_one = ParamPoly::from_ints(Param::Mu, &[1, 2]);
        let p = CoeffPoly::monomial(two_mu_one.clone(), 1);
        let expect = CoeffPoly::monomial(two_mu_one.scale(&rat(1, 2)), 2);
        assert_eq!(p.integrate_from_zero(), expect);
    }

    #[test]
    fn divide_by_z_cases() {
        let z3 = CoeffPoly::monomial(c(rat(1, 6)), 3);
        assert_eq!(
            z3.divide_by_z().unwrap(),
            CoeffPoly::monomial(c(rat(1, 6)), 2)
        );
        assert!(z_poly(Param::Mu).divide_by_z().unwrap().is_one());
        let err = CoeffPoly::one(Param::Mu).divide_by_z().unwrap_err();
        assert!(matches!(err, Error::NotDivisible(_)));
    }

    #[test]
    fn parity_is_checked() {
        let coeffs = vec![ParamPoly::one(Param::Mu), ParamPoly::one(Param::Mu)];
        let err = CoeffPoly::new(Param::Mu, coeffs.clone(), Parity::Even).unwrap_err();
        assert!(matches!(err, Error::ParityViolation(_)));
        let p = CoeffPoly::new(Param::Mu, coeffs, Parity::None).unwrap();
        assert_eq!(p.observed_parity(), Parity::None);
    }

    #[test]
    fn substitution_sign_flip() {
        // (μ−1)·z²/6 with μ → −μ
        let p = CoeffPoly::monomial(ParamPoly::new(Param::Mu, vec![rat(-1, 6), rat(1, 6)]), 2);
        let neg_mu = -&mu();
        let got = p.substitute_param(&neg_mu);
        let expect =
            CoeffPoly::monomial(ParamPoly::new(Param::Mu, vec![rat(-1, 6), rat(-1, 6)]), 2);
        assert_eq!(got, expect);
        assert_eq!(got.substitute_param(&neg_mu), p);
        assert!(CoeffPoly::one(Param::Mu).substitute_param(&neg_mu).is_one());
    }

    #[test]
    fn evaluate_examples() {
        let z3 = CoeffPoly::monomial(c(rat(1, 6)), 3);
        let v = z3.evaluate(Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0));
        assert!((v.re - 4.0 / 3.0).abs() < 1e-15);
        // (μ−1)z²/6 + z⁶/72 at μ = 0.5, z = 1
        let a1 = &CoeffPoly::monomial(ParamPoly::new(Param::Mu, vec![rat(-1, 6), rat(1, 6)]), 2)
            + &CoeffPoly::monomial(c(rat(1, 72)), 6);
        let v = a1.evaluate(Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0));
        assert!((v.re - (-0.5 / 6.0 + 1.0 / 72.0)).abs() < 1e-15);
        assert!((v.re + 0.069_444_444_444_444_44).abs() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let p = CoeffPoly::monomial(ParamPoly::new(Param::Mu, vec![rat(-1, 6), rat(1, 6)]), 2);
        let j = p.to_json();
        assert_eq!(j.to_string(), r#"[[],[],["-1/6","1/6"]]"#);
        let back = CoeffPoly::from_json(Param::Mu, Parity::Even, &j).unwrap();
        assert_eq!(back, p);
    }
}
