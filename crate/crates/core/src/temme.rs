//! The generating-function route to the lowered coefficients.
//!
//! `f(s, z) = exp(z² μ(s)) · ((s/2)/sinh(s/2))^b` with
//! `μ(s) = 1/s - 1/(e^s - 1) - 1/2` has Maclaurin coefficients `c_k(z)`.
//! Iterating `c_k^{(n+1)} = 4(z² c_{k+2}^{(n)} + (1 - b + k) c_{k+1}^{(n)})`
//! yields `a†_n = c_0^{(n)}` and `b†_n = -2z c_1^{(n)}`, which coincide with
//! the lowered coefficients under `μ = b - 1`.
//!
//! Also here: generalized Bernoulli polynomials `B_n^{(ℓ)}(x)` from
//! `(t/(e^t - 1))^ℓ e^{xt}`, and the coefficients `d_n`, `d̃_n` of the
//! gamma-ratio expansion.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use crate::error::{Error, Result};
use crate::ratpoly::rational::{factorial, int, rat};
use crate::ratpoly::{z_poly, CoeffPoly, Param, ParamPoly, Parity, SeriesVar, TruncSeries};

pub const DEFAULT_NMAX: usize = 8;
pub const DEFAULT_KMAX: usize = 2;

/// `(e^t - 1)/t = Σ t^n/(n+1)!` through `t^order`.
fn expm1_over_t(var: SeriesVar, param: Param, order: usize) -> TruncSeries {
    let coeffs = (0..=order as u64)
        .map(|n| BigRational::new(BigInt::from(1), factorial(n + 1)))
        .collect();
    TruncSeries::from_rationals(var, param, coeffs, order)
}

/// Maclaurin coefficients of `μ(s) = 1/s - 1/(e^s - 1) - 1/2` through `s^order`.
pub fn mu_series(order: usize) -> Result<TruncSeries> {
    let param = Param::B;
    // s/(e^s - 1), one order deeper so that dividing by s keeps `order`.
    let bern = expm1_over_t(SeriesVar::S, param, order + 1).reciprocal()?;
    let one = TruncSeries::one(SeriesVar::S, param, order + 1);
    let mu = one.sub(&bern).shift_down()?;
    let half = TruncSeries::from_rationals(SeriesVar::S, param, vec![rat(1, 2)], order);
    Ok(mu.sub(&half))
}

/// `(s/2)/sinh(s/2)` through `s^order`.
fn half_s_over_sinh(order: usize) -> Result<TruncSeries> {
    // sinh(x)/x = Σ x^{2k}/(2k+1)!, x = s/2.
    let coeffs = (0..=order as u64)
        .map(|n| {
            if n % 2 == 1 {
                BigRational::from_integer(0.into())
            } else {
                BigRational::new(
                    BigInt::from(1),
                    factorial(n + 1) * BigInt::from(2).pow(n as u32),
                )
            }
        })
        .collect();
    TruncSeries::from_rationals(SeriesVar::S, Param::B, coeffs, order).reciprocal()
}

/// `c_0(z)..c_order(z)`: even polynomials in `z` with coefficients in `b`.
pub fn temme_base_series(order: usize) -> Result<Vec<CoeffPoly>> {
    let z2 = CoeffPoly::monomial(ParamPoly::one(Param::B), 2);
    let exponent = mu_series(order)?.mul_coeff(&z2);
    let gauss = exponent.exp()?;
    let kernel = half_s_over_sinh(order)?.pow_param(&ParamPoly::var(Param::B))?;
    gauss
        .mul(&kernel)
        .into_coeffs()
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            c.with_parity(Parity::Even)
                .map_err(|e| Error::Internal(format!("c_{k}: {e}")))
        })
        .collect()
}

/// The iterated coefficients and the extracted `a†`, `b†`.
#[derive(Clone, Debug, PartialEq)]
pub struct TemmeTable {
    pub base: Vec<CoeffPoly>,
    /// `iterated[n][k] = c_k^{(n)}` for `k ≤ k_max`.
    pub iterated: Vec<Vec<CoeffPoly>>,
    pub adagger: Vec<CoeffPoly>,
    pub bdagger: Vec<CoeffPoly>,
}

impl TemmeTable {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "param": "b",
            "adagger": self.adagger,
            "bdagger": self.bdagger,
        })
    }
}

/// Base length needed by [`temme_iterate`].
pub fn required_base_len(n_max: usize, k_max: usize) -> usize {
    k_max + 2 * n_max + 1
}

pub fn temme_iterate(base: &[CoeffPoly], n_max: usize, k_max: usize) -> Result<TemmeTable> {
    if k_max < 1 {
        return Err(Error::Domain(
            "k_max must be at least 1 to extract b†".into(),
        ));
    }
    let required = required_base_len(n_max, k_max);
    if base.len() < required {
        return Err(Error::OrderStarvation {
            required,
            available: base.len(),
        });
    }
    let z2 = CoeffPoly::monomial(ParamPoly::one(Param::B), 2);
    let mut level: Vec<CoeffPoly> = base[..required].to_vec();
    let mut iterated = Vec::with_capacity(n_max + 1);
    let mut adagger = Vec::with_capacity(n_max + 1);
    let mut bdagger = Vec::with_capacity(n_max + 1);
    let minus_two_z = z_poly(Param::B).scale(&int(-2));
    for n in 0..=n_max {
        iterated.push(level[..=k_max].to_vec());
        adagger.push(level[0].clone());
        bdagger.push((&minus_two_z * &level[1]).with_parity(Parity::Odd)?);
        if n == n_max {
            break;
        }
        let next_len = level.len() - 2;
        let next = (0..next_len)
            .map(|k| {
                // 1 - b + k
                let lin = ParamPoly::from_ints(Param::B, &[1 + k as i64, -1]);
                (&(&z2 * &level[k + 2]) + &level[k + 1].mul_param(&lin)).scale(&int(4))
            })
            .collect();
        level = next;
    }
    Ok(TemmeTable {
        base: base.to_vec(),
        iterated,
        adagger,
        bdagger,
    })
}

/// Builds the full table with base order `k_max + 2·n_max`.
pub fn temme_table(n_max: usize, k_max: usize) -> Result<TemmeTable> {
    let base = temme_base_series(required_base_len(n_max, k_max) - 1)?;
    temme_iterate(&base, n_max, k_max)
}

/// `B_0^{(ℓ)}(x) .. B_{n_max}^{(ℓ)}(x)` for parameter-polynomial `ℓ`, `x`.
pub fn generalized_bernoulli(
    n_max: usize,
    ell: &ParamPoly,
    x: &ParamPoly,
) -> Result<Vec<ParamPoly>> {
    let param = if ell.is_constant() {
        x.param()
    } else {
        ell.param()
    };
    let ell = ell.clone().with_param_if_constant(param);
    let x = x.clone().with_param_if_constant(param);
    // log(t/(e^t - 1)) = -log((e^t - 1)/t)
    let log_kernel = expm1_over_t(SeriesVar::T, param, n_max)
        .log()?
        .scale(&int(-1));
    let mut exponent = log_kernel.mul_coeff(&CoeffPoly::constant(ell));
    if n_max >= 1 {
        let mut xt = vec![CoeffPoly::zero(param), CoeffPoly::constant(x)];
        xt.truncate(n_max + 1);
        exponent = exponent.add(&TruncSeries::new(SeriesVar::T, param, xt, n_max));
    }
    let gf = exponent.exp()?;
    Ok(gf
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            c.at_zero()
                .scale(&BigRational::from_integer(factorial(n as u64)))
        })
        .collect())
}

/// `binom(p, n) = p(p-1)...(p-n+1)/n!` for a parameter polynomial `p`.
pub fn binomial_poly(p: &ParamPoly, n: usize) -> ParamPoly {
    let mut acc = ParamPoly::one(p.param());
    for j in 0..n {
        let shifted = p - &ParamPoly::constant(p.param(), int(j as i64));
        acc = &acc * &shifted;
    }
    acc.scale(&BigRational::new(BigInt::from(1), factorial(n as u64)))
}

/// `d_n = 4^n binom(1-b, n) B_n^{(2-b)}(1 - b/2)` and
/// `d̃_n = 4^n binom(b-1, n) B_n^{(b)}(b/2)` for `n ≤ n_max`.
pub fn gamma_ratio_coefficients(n_max: usize) -> Result<(Vec<ParamPoly>, Vec<ParamPoly>)> {
    let p =
        |c: &[(i64, i64)]| ParamPoly::new(Param::B, c.iter().map(|&(a, b)| rat(a, b)).collect());
    let bern = generalized_bernoulli(n_max, &p(&[(2, 1), (-1, 1)]), &p(&[(1, 1), (-1, 2)]))?;
    let bern_t = generalized_bernoulli(n_max, &p(&[(0, 1), (1, 1)]), &p(&[(0, 1), (1, 2)]))?;
    let one_minus_b = p(&[(1, 1), (-1, 1)]);
    let b_minus_one = p(&[(-1, 1), (1, 1)]);
    let mut d = Vec::with_capacity(n_max + 1);
    let mut dt = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let four_n = BigRational::from_integer(BigInt::from(4).pow(n as u32));
        d.push((&binomial_poly(&one_minus_b, n) * &bern[n]).scale(&four_n));
        dt.push((&binomial_poly(&b_minus_one, n) * &bern_t[n]).scale(&four_n));
    }
    Ok((d, dt))
}
