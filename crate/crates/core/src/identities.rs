//! The exact identity suite behind `verify`.
//!
//! Every check here compares exact rational polynomials; a check passes only
//! on exact equality.

use std::fmt;

use crate::error::Result;
use crate::olver::{
    check_normalization, check_recursion, compute_coefficient_table, f_confluent,
    lower_coefficients, normalizer_series, shift_basis, CoefficientTable, LoweredCoefficients,
    Sign,
};
use crate::ratpoly::rational::{factorial, int, rat};
use crate::ratpoly::{CoeffPoly, Param, ParamPoly, Parity, SeriesVar, TruncSeries};
use crate::temme::{
    gamma_ratio_coefficients, generalized_bernoulli, temme_table, TemmeTable, DEFAULT_KMAX,
};

/// Outcome of one named identity.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityOutcome {
    pub name: &'static str,
    pub scope: String,
    pub failure: Option<String>,
}

impl IdentityOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for IdentityOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "{}: PASS ({}, exact)", self.name, self.scope),
            Some(why) => write!(f, "{}: FAIL ({}): {why}", self.name, self.scope),
        }
    }
}

type Check = std::result::Result<(), String>;

fn outcome(name: &'static str, scope: String, check: Check) -> IdentityOutcome {
    IdentityOutcome {
        name,
        scope,
        failure: check.err(),
    }
}

/// The shared inputs of the suite, built once.
pub struct SuiteData {
    pub n_max: usize,
    pub table: CoefficientTable,
    pub lowered: LoweredCoefficients,
    pub temme: TemmeTable,
    pub d: Vec<ParamPoly>,
    pub dtilde: Vec<ParamPoly>,
}

impl SuiteData {
    /// Depth `n_max` for the generating-function route; the Olver table is
    /// taken deep enough for the reciprocal law through `u^{-18}`.
    pub fn build(n_max: usize) -> Result<Self> {
        let order = (n_max + 1).max(crate::olver::DEFAULT_ORDER);
        let table = compute_coefficient_table(&f_confluent(Param::Mu), order)?;
        let lowered = lower_coefficients(&table)?;
        let temme = temme_table(n_max, DEFAULT_KMAX)?;
        let (d, dtilde) = gamma_ratio_coefficients(n_max + 1)?;
        Ok(SuiteData {
            n_max,
            table,
            lowered,
            temme,
            d,
            dtilde,
        })
    }
}

pub fn recursion(data: &SuiteData) -> Check {
    let t = &data.table;
    check_recursion(t.f(), t.a(), t.b())
}

pub fn normalization(data: &SuiteData) -> Check {
    check_normalization(&data.table)
}

/// `F(u, μ)·F(u, -μ) = 1` through `u^{-2·order}`.
pub fn reciprocal_law(data: &SuiteData, order: usize) -> Check {
    let plus = normalizer_series(&data.table, Sign::Plus, order).map_err(|e| e.to_string())?;
    let minus = normalizer_series(&data.table, Sign::Minus, order).map_err(|e| e.to_string())?;
    let prod = plus.series.mul(&minus.series);
    if prod == TruncSeries::one(SeriesVar::InvU2, Param::Mu, order) {
        Ok(())
    } else {
        Err(format!("product is {prod}"))
    }
}

/// `a_s = A_s + 2μ Σ_r A_r B'_{s-1-r}(-μ, 0)` and the same for `b_s`, i.e.
/// the lowered pair is the basis shift of `(A, B)` by `F(u, -μ)`.
pub fn lowered_is_shift(data: &SuiteData, s_max: usize) -> Check {
    let seeds_series =
        normalizer_series(&data.table, Sign::Minus, s_max).map_err(|e| e.to_string())?;
    let seeds: Vec<ParamPoly> = (0..=s_max).map(|n| seeds_series.coefficient(n)).collect();
    let (ha, hb) = shift_basis(&data.table, &seeds).map_err(|e| e.to_string())?;
    for s in 0..=s_max {
        if ha[s] != data.lowered.a[s] {
            return Err(format!("a_{s} differs from the shifted A_{s}"));
        }
        if hb[s] != data.lowered.b[s] {
            return Err(format!("b_{s} differs from the shifted B_{s}"));
        }
    }
    Ok(())
}

pub fn lowered_recursion(data: &SuiteData) -> Check {
    check_recursion(data.table.f(), &data.lowered.a, &data.lowered.b)
}

/// `a_n = a†_n`, `b_n = b†_n` under `μ = b - 1`.
pub fn generating_function_route(data: &SuiteData) -> Check {
    let low = data.lowered.in_param(Param::B);
    for n in 0..=data.n_max {
        if low.a[n] != data.temme.adagger[n] {
            return Err(format!(
                "a_{n} = {} but a†_{n} = {}",
                low.a[n], data.temme.adagger[n]
            ));
        }
        if low.b[n] != data.temme.bdagger[n] {
            return Err(format!(
                "b_{n} = {} but b†_{n} = {}",
                low.b[n], data.temme.bdagger[n]
            ));
        }
    }
    Ok(())
}

pub fn odd_d_vanish(data: &SuiteData) -> Check {
    for (n, d) in data.d.iter().enumerate().skip(1).step_by(2) {
        if !d.is_zero() {
            return Err(format!("d_{n} = {d}"));
        }
    }
    Ok(())
}

/// `B_n'(0) = ½ d_{n+1}/(1 - b)` for `n ≤ n_max`.
pub fn bprime_bridge(data: &SuiteData, n_max: usize) -> Check {
    let table = data.table.in_param(Param::B);
    let one_minus_b = ParamPoly::from_ints(Param::B, &[1, -1]);
    for n in 0..=n_max {
        let lhs = table.b()[n].coeff(1);
        let rhs = data.d[n + 1]
            .div_exact(&one_minus_b)
            .map_err(|e| format!("d_{}: {e}", n + 1))?
            .scale(&rat(1, 2));
        if lhs != rhs {
            return Err(format!("B_{n}'(0) = {lhs}, bridge gives {rhs}"));
        }
    }
    Ok(())
}

/// `a_n(0) = d̃_n`.
pub fn a_at_zero(data: &SuiteData) -> Check {
    let low = data.lowered.in_param(Param::B);
    for n in 0..=data.n_max {
        let lhs = low.a[n].at_zero();
        if lhs != data.dtilde[n] {
            return Err(format!("a_{n}(0) = {lhs}, d̃_{n} = {}", data.dtilde[n]));
        }
    }
    Ok(())
}

/// Multiplying `Σ B_n^{(ℓ)}(x) tⁿ/n!` by `((e^t - 1)/t)^ℓ`, built by repeated
/// multiplication, must leave `e^{xt}`, for `ℓ = 0..4` and symbolic `x`.
pub fn bernoulli_resubstitution(n_max: usize) -> Check {
    let x = ParamPoly::var(Param::B);
    let expm1_over_t = TruncSeries::from_rationals(
        SeriesVar::T,
        Param::B,
        (0..=n_max as u64)
            .map(|n| num_rational::BigRational::new(1.into(), factorial(n + 1)))
            .collect(),
        n_max,
    );
    let mut power = TruncSeries::one(SeriesVar::T, Param::B, n_max);
    for ell in 0..=4i64 {
        let values = generalized_bernoulli(n_max, &ParamPoly::constant(Param::B, int(ell)), &x)
            .map_err(|e| e.to_string())?;
        let gf = TruncSeries::new(
            SeriesVar::T,
            Param::B,
            values
                .iter()
                .enumerate()
                .map(|(n, v)| {
                    CoeffPoly::constant(v.scale(&num_rational::BigRational::new(
                        1.into(),
                        factorial(n as u64),
                    )))
                })
                .collect(),
            n_max,
        );
        let back = gf.mul(&power);
        let mut xn = ParamPoly::one(Param::B);
        for n in 0..=n_max {
            let expect = xn.scale(&num_rational::BigRational::new(
                1.into(),
                factorial(n as u64),
            ));
            if back.coeff(n).at_zero() != expect || back.coeff(n).degree().unwrap_or(0) != 0 {
                return Err(format!("ℓ = {ell}: t^{n} coefficient {}", back.coeff(n)));
            }
            xn = &xn * &x;
        }
        power = power.mul(&expm1_over_t);
    }
    Ok(())
}

/// Every `c_k(z)` even in `z`; `c_n(0) = 0` for odd `n`.
pub fn base_parity(data: &SuiteData) -> Check {
    for (k, c) in data.temme.base.iter().enumerate() {
        if !c.is_zero() && c.observed_parity() != Parity::Even {
            return Err(format!("c_{k} is not even in z"));
        }
        if k % 2 == 1 && !c.at_zero().is_zero() {
            return Err(format!("c_{k}(0) = {}", c.at_zero()));
        }
    }
    if !data.temme.iterated[0][0].is_one() || !data.temme.adagger[0].is_one() {
        return Err("c_0 or a†_0 is not 1".into());
    }
    Ok(())
}

/// Runs every identity with generating-function depth `n_max`.
pub fn run_suite(n_max: usize) -> Result<Vec<IdentityOutcome>> {
    let data = SuiteData::build(n_max)?;
    let recip_order = data.table.order() + 1;
    let shift_order = n_max.min(data.table.order());
    let bridge_order = n_max.saturating_sub(2);
    let odd_top = data.d.len() - 1;
    Ok(vec![
        outcome(
            "recursion",
            format!("s<={}", data.table.order()),
            recursion(&data),
        ),
        outcome(
            "parity-normalization",
            format!("s<={}", data.table.order()),
            normalization(&data),
        ),
        outcome(
            "reciprocal-law",
            format!("u^-{}", 2 * recip_order),
            reciprocal_law(&data, recip_order),
        ),
        outcome(
            "lowered-shift",
            format!("s<={shift_order}"),
            lowered_is_shift(&data, shift_order),
        ),
        outcome(
            "lowered-recursion",
            format!("s<={}", data.table.order()),
            lowered_recursion(&data),
        ),
        outcome(
            "theorem-9.1",
            format!("n<={n_max}"),
            generating_function_route(&data),
        ),
        outcome("d-odd-zero", format!("n<={odd_top}"), odd_d_vanish(&data)),
        outcome(
            "bprime-bridge",
            format!("n<={bridge_order}"),
            bprime_bridge(&data, bridge_order),
        ),
        outcome("a-at-zero", format!("n<={n_max}"), a_at_zero(&data)),
        outcome(
            "bernoulli-resubstitution",
            format!("n<={n_max}"),
            bernoulli_resubstitution(n_max),
        ),
        outcome(
            "c-parity",
            format!("k<={}", data.temme.base.len() - 1),
            base_parity(&data),
        ),
    ])
}
