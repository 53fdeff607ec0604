use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, int, to_f64};
use crate::error::{Error, Result};

/// The formal parameter a [`ParamPoly`] is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Mu,
    B,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::Mu => "mu",
            Param::B => "b",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mu" | "μ" => Ok(Param::Mu),
            "b" => Ok(Param::B),
            _ => Err(Error::Parse(format!("unknown parameter {s:?}"))),
        }
    }
}

/// A polynomial in one formal parameter with exact rational coefficients.
///
/// `coeffs[k]` multiplies `param^k`. The highest stored coefficient is never
/// zero, so the zero polynomial has no coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    param: Param,
    coeffs: Vec<BigRational>,
}

impl ParamPoly {
    pub fn new(param: Param, mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ParamPoly { param, coeffs }
    }

    pub fn zero(param: Param) -> Self {
        ParamPoly {
            param,
            coeffs: Vec::new(),
        }
    }

    pub fn one(param: Param) -> Self {
        Self::constant(param, BigRational::one())
    }

    pub fn constant(param: Param, c: BigRational) -> Self {
        Self::new(param, vec![c])
    }

    /// The parameter itself, `x ↦ x`.
    pub fn var(param: Param) -> Self {
        Self::new(param, vec![BigRational::zero(), BigRational::one()])
    }

    /// Builds `Σ c_k x^k` from small integer coefficients.
    pub fn from_ints(param: Param, coeffs: &[i64]) -> Self {
        Self::new(param, coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn param(&self) -> Param {
        self.param
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Relabels a constant polynomial; non-constant polynomials keep their
    /// parameter.
    pub fn with_param_if_constant(mut self, param: Param) -> Self {
        if self.is_constant() {
            self.param = param;
        }
        self
    }

    fn joint_param(&self, other: &Self) -> Param {
        match (self.is_constant(), other.is_constant()) {
            (true, false) => other.param,
            (false, true) | (true, true) => self.param,
            (false, false) => {
                assert_eq!(
                    self.param, other.param,
                    "arithmetic between polynomials in different parameters"
                );
                self.param
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.param);
        }
        Self::new(self.param, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Replaces the parameter by `image`, which may be written in another
    /// parameter; the result is written in `image`'s parameter.
    pub fn substitute(&self, image: &ParamPoly) -> ParamPoly {
        let mut acc = ParamPoly::zero(image.param);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * image) + &ParamPoly::constant(image.param, c.clone());
        }
        ParamPoly {
            param: image.param,
            ..acc
        }
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + to_f64(c))
    }

    /// Derivative with respect to the parameter.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.param,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    /// Exact quotient `self / divisor`; fails if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &ParamPoly) -> Result<ParamPoly> {
        let param = self.joint_param(divisor);
        let Some(dd) = divisor.degree() else {
            return Err(Error::NotDivisible(
                "division by the zero polynomial".into(),
            ));
        };
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return if rem.iter().all(Zero::is_zero) {
                Ok(ParamPoly::zero(param))
            } else {
                Err(Error::NotDivisible(format!("{self} by {divisor}")))
            };
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] / &lead;
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible(format!("{self} by {divisor}")));
        }
        Ok(ParamPoly::new(param, quot))
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;

    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let param = self.joint_param(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ParamPoly::new(
            param,
            (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect(),
        )
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;

    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let param = self.joint_param(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ParamPoly::new(
            param,
            (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect(),
        )
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;

    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let param = self.joint_param(rhs);
        if self.is_zero() || rhs.is_zero() {
            return ParamPoly::zero(param);
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ParamPoly::new(param, out)
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;

    fn neg(self) -> ParamPoly {
        ParamPoly::new(self.param, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                f.write_str(&format_rational(&mag))?;
            }
            match k {
                0 => {}
                1 if show_mag => write!(f, "*{}", self.param)?,
                1 => write!(f, "{}", self.param)?,
                _ if show_mag => write!(f, "*{}^{k}", self.param)?,
                _ => write!(f, "{}^{k}", self.param)?,
            }
        }
        Ok(())
    }
}

impl Serialize for ParamPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let texts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        texts.serialize(s)
    }
}

/// Parses a degree-indexed array of rational strings in the given parameter.
pub fn param_poly_from_json(param: Param, v: &serde_json::Value) -> Result<ParamPoly> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("parameter polynomial must be an array".into()))?;
    let coeffs = arr
        .iter()
        .map(|x| {
            x.as_str()
                .ok_or_else(|| Error::Parse("coefficient must be a string".into()))
                .and_then(super::rational::parse_rational)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ParamPoly::new(param, coeffs))
}

/// Parses a polynomial such as `1 - b/2`, `2 - b`, `3/4*b^2 + b` or the
/// [`Display`](fmt::Display) form of a [`ParamPoly`]. Only `param` may occur
/// as a variable.
pub fn parse_param_poly(param: Param, text: &str) -> Result<ParamPoly> {
    let bad = |why: &str| Error::Parse(format!("{why} in polynomial {text:?}"));
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(bad("empty input"));
    }
    let var: Vec<char> = param.name().chars().collect();
    let alt: Vec<char> = if param == Param::Mu {
        vec!['μ']
    } else {
        var.clone()
    };
    let mut pos = 0;
    let digits = |pos: &mut usize| -> Option<num_bigint::BigInt> {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        (start < *pos).then(|| {
            chars[start..*pos]
                .iter()
                .collect::<String>()
                .parse()
                .expect("ascii digits")
        })
    };
    let mut coeffs: Vec<BigRational> = Vec::new();
    while pos < chars.len() {
        let mut sign = BigRational::one();
        if pos > 0 || chars[0] == '+' || chars[0] == '-' {
            match chars.get(pos) {
                Some('+') => pos += 1,
                Some('-') => {
                    sign = -sign;
                    pos += 1;
                }
                _ => return Err(bad("expected + or -")),
            }
        }
        let mut c = sign;
        let mut have_number = false;
        if let Some(n) = digits(&mut pos) {
            c *= BigRational::from_integer(n);
            have_number = true;
            if chars.get(pos) == Some(&'/')
                && chars.get(pos + 1).is_some_and(|d| d.is_ascii_digit())
            {
                pos += 1;
                let d = digits(&mut pos).expect("checked digit");
                if d.is_zero() {
                    return Err(bad("zero denominator"));
                }
                c /= BigRational::from_integer(d);
            }
            if chars.get(pos) == Some(&'*') {
                pos += 1;
            }
        }
        let mut degree = 0usize;
        let matches = |v: &[char], pos: usize| {
            chars.len() >= pos + v.len() && chars[pos..pos + v.len()] == *v
        };
        let width = if matches(&var, pos) {
            var.len()
        } else if matches(&alt, pos) {
            alt.len()
        } else {
            0
        };
        if width > 0 {
            pos += width;
            degree = 1;
            if chars.get(pos) == Some(&'^') {
                pos += 1;
                let k = digits(&mut pos).ok_or_else(|| bad("missing exponent"))?;
                degree = k.try_into().map_err(|_| bad("exponent too large"))?;
            }
        } else if !have_number {
            return Err(bad("expected a number or the variable"));
        }
        if chars.get(pos) == Some(&'/') {
            pos += 1;
            let d = digits(&mut pos).ok_or_else(|| bad("missing divisor"))?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            c /= BigRational::from_integer(d);
        }
        if pos < chars.len() && chars[pos] != '+' && chars[pos] != '-' {
            return Err(bad(&format!("unexpected {:?}", chars[pos])));
        }
        if coeffs.len() <= degree {
            coeffs.resize(degree + 1, BigRational::zero());
        }
        coeffs[degree] += c;
    }
    Ok(ParamPoly::new(param, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rational::rat;

    #[test]
    fn normalizes_trailing_zeros() {
        let p = ParamPoly::from_ints(Param::Mu, &[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(ParamPoly::from_ints(Param::Mu, &[0, 0]).is_zero());
    }

    #[test]
    fn substitution_mu_to_b_minus_one() {
        let mu = ParamPoly::var(Param::Mu);
        let image = ParamPoly::from_ints(Param::B, &[-1, 1]);
        assert_eq!(mu.substitute(&image), image);
        let one = ParamPoly::one(Param::Mu);
        assert_eq!(one.substitute(&image), ParamPoly::one(Param::B));
    }

    #[test]
    fn exact_division() {
        // (1 - b)(2 + b) / (1 - b)
        let f = ParamPoly::from_ints(Param::B, &[1, -1]);
        let g = ParamPoly::from_ints(Param::B, &[2, 1]);
        let prod = &f * &g;
        assert_eq!(prod.div_exact(&f).unwrap(), g);
        assert!(g.div_exact(&f).is_err());
        assert!(ParamPoly::one(Param::B)
            .div_exact(&ParamPoly::zero(Param::B))
            .is_err());
    }

    #[test]
    fn display() {
        let p = ParamPoly::new(Param::Mu, vec![rat(-1, 6), rat(1, 6)]);
        assert_eq!(p.to_string(), "-1/6 + 1/6*mu");
        assert_eq!(
            ParamPoly::from_ints(Param::B, &[0, -1, 1]).to_string(),
            "-b + b^2"
        );
    }

    #[test]
    fn eval() {
        let p = ParamPoly::new(Param::Mu, vec![rat(-1, 6), rat(1, 6)]);
        assert_eq!(p.eval_rational(&rat(1, 2)), rat(-1, 12));
        let v = p.eval_complex(Complex64::new(0.5, 0.0));
        assert!((v.re + 1.0 / 12.0).abs() < 1e-16);
    }

    #[test]
    fn parses_common_forms() {
        let b = |c: &[(i64, i64)]| {
            ParamPoly::new(Param::B, c.iter().map(|&(p, q)| rat(p, q)).collect())
        };
        assert_eq!(
            parse_param_poly(Param::B, "2-b").unwrap(),
            b(&[(2, 1), (-1, 1)])
        );
        assert_eq!(
            parse_param_poly(Param::B, "1 - b/2").unwrap(),
            b(&[(1, 1), (-1, 2)])
        );
        assert_eq!(
            parse_param_poly(Param::B, "b/2").unwrap(),
            b(&[(0, 1), (1, 2)])
        );
        assert_eq!(
            parse_param_poly(Param::B, "-3/4*b^2 + 2b").unwrap(),
            b(&[(0, 1), (2, 1), (-3, 4)])
        );
        assert_eq!(
            parse_param_poly(Param::B, "0").unwrap(),
            ParamPoly::zero(Param::B)
        );
        assert_eq!(
            parse_param_poly(Param::Mu, "mu^2 - 1").unwrap(),
            ParamPoly::from_ints(Param::Mu, &[-1, 0, 1])
        );
        for bad in ["", "b^", "1/0", "x", "2 b b", "b-"] {
            assert!(parse_param_poly(Param::B, bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn display_round_trips() {
        let p = ParamPoly::new(Param::B, vec![rat(-7, 3), int(0), rat(5, 2), int(-1)]);
        assert_eq!(parse_param_poly(Param::B, &p.to_string()).unwrap(), p);
    }
}
