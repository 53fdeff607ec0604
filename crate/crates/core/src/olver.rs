//! Coefficient polynomials of the Bessel-type expansion
//!
//! ```text
//! w(z) = z Z_μ(uz) Σ A_s(z)/u^{2s} + (z/u) Z_{μ+1}(uz) Σ B_s(z)/u^{2s}
//! ```
//!
//! for `w'' = w'/z + (u² + (μ²-1)/z² + f(z)) w` with `f` an even polynomial.
//! The recursion is
//!
//! ```text
//! 2B_s     = -A_s' + ∫₀ᶻ (f A_s - (2μ+1) A_s'/t) dt
//! 2A_{s+1} = (2μ+1) B_s/z - B_s' + ∫ f B_s dz
//! ```
//!
//! with `A_0 = 1` and the free constant fixed by `A_s(0) = 0` for `s ≥ 1`.

use num_rational::BigRational;
use serde_json::json;

use crate::error::{Error, Result};
use crate::ratpoly::rational::{int, rat};
use crate::ratpoly::{
    b_as_mu, mu_as_b, neg_mu, CoeffPoly, Param, ParamPoly, Parity, SeriesVar, TruncSeries,
};

/// Default expansion depth for coefficient tables.
pub const DEFAULT_ORDER: usize = 10;

/// `A_0..A_S` and `B_0..B_S` for a given `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    f: CoeffPoly,
    order: usize,
    a: Vec<CoeffPoly>,
    b: Vec<CoeffPoly>,
    param: Param,
}

/// `f(z) = z²`, the confluent hypergeometric case.
pub fn f_confluent(param: Param) -> CoeffPoly {
    CoeffPoly::monomial(ParamPoly::one(param), 2)
}

/// `2μ + 1` written in `param` (`2b - 1` when `param` is `b`).
pub fn two_mu_plus_one(param: Param) -> ParamPoly {
    match param {
        Param::Mu => ParamPoly::from_ints(Param::Mu, &[1, 2]),
        Param::B => ParamPoly::from_ints(Param::B, &[-1, 2]),
    }
}

/// `μ` written in `param`.
pub fn mu_in(param: Param) -> ParamPoly {
    match param {
        Param::Mu => ParamPoly::var(Param::Mu),
        Param::B => mu_as_b(),
    }
}

fn half() -> BigRational {
    rat(1, 2)
}

/// Runs the recursion for `A_0..A_order`, `B_0..B_order`.
pub fn compute_coefficient_table(f: &CoeffPoly, order: usize) -> Result<CoefficientTable> {
    if f.param() != Param::Mu && f.coeffs().iter().any(|c| !c.is_constant()) {
        return Err(Error::Domain("f must be written in mu".into()));
    }
    let f = f
        .substitute_param(&ParamPoly::var(Param::Mu))
        .with_parity(Parity::Even)?;
    let param = Param::Mu;
    let k = two_mu_plus_one(param);

    let mut a = vec![CoeffPoly::one(param)];
    let mut b = Vec::with_capacity(order + 1);
    for s in 0..=order {
        let a_s = &a[s];
        let da = a_s.derivative();
        let integrand = &(&f * a_s) - &da.divide_by_z()?.mul_param(&k);
        let two_b = &integrand.integrate_from_zero() - &da;
        let b_s = two_b
            .scale(&half())
            .with_parity(Parity::Odd)
            .map_err(|e| Error::Internal(format!("B_{s}: {e}")))?;
        if s < order {
            let two_a = &(&b_s.divide_by_z()?.mul_param(&k) - &b_s.derivative())
                + &(&f * &b_s).integrate_from_zero();
            let expr = two_a.scale(&half());
            let a_next = (&expr - &CoeffPoly::constant(expr.at_zero()))
                .with_parity(Parity::Even)
                .map_err(|e| Error::Internal(format!("A_{}: {e}", s + 1)))?;
            a.push(a_next);
        }
        b.push(b_s);
    }
    Ok(CoefficientTable {
        f,
        order,
        a,
        b,
        param,
    })
}

impl CoefficientTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn param(&self) -> Param {
        self.param
    }

    pub fn f(&self) -> &CoeffPoly {
        &self.f
    }

    pub fn a(&self) -> &[CoeffPoly] {
        &self.a
    }

    pub fn b(&self) -> &[CoeffPoly] {
        &self.b
    }

    /// Rewrites every entry in the requested parameter via `μ = b - 1`.
    pub fn in_param(&self, param: Param) -> CoefficientTable {
        if param == self.param {
            return self.clone();
        }
        let image = match param {
            Param::B => mu_as_b(),
            Param::Mu => b_as_mu(),
        };
        let sub = |v: &[CoeffPoly]| v.iter().map(|p| p.substitute_param(&image)).collect();
        CoefficientTable {
            f: self.f.substitute_param(&image),
            order: self.order,
            a: sub(&self.a),
            b: sub(&self.b),
            param,
        }
    }

    /// JSON form used by the CLI: rationals as `"p/q"` strings,
    /// polynomials as degree-indexed arrays.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "f": self.f.to_json(),
            "order": self.order,
            "param": self.param.name(),
            "variant": "AB",
            "A": self.a,
            "B": self.b,
        })
    }
}

/// `a_0..a_S`, `b_0..b_S`: the coefficients obtained by `μ ↦ -μ` plus the
/// `2μ/z` correction.
#[derive(Clone, Debug, PartialEq)]
pub struct LoweredCoefficients {
    pub a: Vec<CoeffPoly>,
    pub b: Vec<CoeffPoly>,
    pub param: Param,
}

impl LoweredCoefficients {
    pub fn in_param(&self, param: Param) -> LoweredCoefficients {
        if param == self.param {
            return self.clone();
        }
        let image = match param {
            Param::B => mu_as_b(),
            Param::Mu => b_as_mu(),
        };
        let sub = |v: &[CoeffPoly]| v.iter().map(|p| p.substitute_param(&image)).collect();
        LoweredCoefficients {
            a: sub(&self.a),
            b: sub(&self.b),
            param,
        }
    }

    pub fn to_json(&self, order: usize) -> serde_json::Value {
        json!({
            "order": order,
            "param": self.param.name(),
            "variant": "ab",
            "a": self.a,
            "b": self.b,
        })
    }
}

/// `a_0 = 1`, `a_{s+1} = A_{s+1}(-μ, z) + (2μ/z) B_s(-μ, z)`, `b_s = B_s(-μ, z)`.
pub fn lower_coefficients(table: &CoefficientTable) -> Result<LoweredCoefficients> {
    let t = table.in_param(Param::Mu);
    let flip = neg_mu();
    let two_mu = ParamPoly::from_ints(Param::Mu, &[0, 2]);
    let b: Vec<CoeffPoly> = t.b.iter().map(|p| p.substitute_param(&flip)).collect();
    let mut a = vec![CoeffPoly::one(Param::Mu)];
    for (a_next, b_s) in t.a[1..=t.order].iter().zip(&b) {
        let shifted = a_next.substitute_param(&flip);
        let corr = b_s.divide_by_z()?.mul_param(&two_mu);
        a.push((&shifted + &corr).with_parity(Parity::Even)?);
    }
    Ok(LoweredCoefficients {
        a,
        b,
        param: Param::Mu,
    })
}

/// Which of `F(u, μ)`, `F(u, -μ)` to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `F(u, ±μ) = 1 ∓ 2μ Σ_s B_s'(±μ, 0) u^{-2s-2}`, truncated in `u^{-2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizerSeries {
    pub sign: Sign,
    pub series: TruncSeries,
}

impl NormalizerSeries {
    /// Coefficient of `u^{-2n}`.
    pub fn coefficient(&self, n: usize) -> ParamPoly {
        self.series.coeff(n).at_zero()
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }
}

/// `B_s'(0)` for every `s` in the table, as parameter polynomials.
pub fn b_prime_at_zero(table: &CoefficientTable) -> Vec<ParamPoly> {
    table.b.iter().map(|p| p.coeff(1)).collect()
}

/// Builds `F(u, ±μ)` through `u^{-2·order}`; needs `table.order() + 1 ≥ order`.
pub fn normalizer_series(
    table: &CoefficientTable,
    sign: Sign,
    order: usize,
) -> Result<NormalizerSeries> {
    if order > table.order + 1 {
        return Err(Error::OrderStarvation {
            required: order - 1,
            available: table.order,
        });
    }
    let t = table.in_param(Param::Mu);
    let (mu, image) = match sign {
        Sign::Plus => (ParamPoly::var(Param::Mu), ParamPoly::var(Param::Mu)),
        Sign::Minus => (neg_mu(), neg_mu()),
    };
    let minus_two_mu = mu.scale(&int(-2));
    let mut coeffs = vec![CoeffPoly::one(Param::Mu)];
    for bp in b_prime_at_zero(&t).into_iter().take(order) {
        coeffs.push(CoeffPoly::constant(&bp.substitute(&image) * &minus_two_mu));
    }
    Ok(NormalizerSeries {
        sign,
        series: TruncSeries::new(SeriesVar::InvU2, Param::Mu, coeffs, order),
    })
}

/// Basis shift: `Â_s = Σ_r A_r·seed_{s-r}`, `B̂_s = Σ_r B_r·seed_{s-r}`,
/// for `s < min(seeds.len(), order + 1)`.
pub fn shift_basis(
    table: &CoefficientTable,
    seeds: &[ParamPoly],
) -> Result<(Vec<CoeffPoly>, Vec<CoeffPoly>)> {
    match seeds.first() {
        Some(s0) if s0.is_one() => {}
        Some(s0) => return Err(Error::InvalidSeed(format!("seed 0 must be 1, got {s0}"))),
        None => return Err(Error::InvalidSeed("empty seed sequence".into())),
    }
    let n = seeds.len().min(table.order + 1);
    let mut hat_a = Vec::with_capacity(n);
    let mut hat_b = Vec::with_capacity(n);
    for s in 0..n {
        let mut sa = CoeffPoly::zero(table.param);
        let mut sb = CoeffPoly::zero(table.param);
        for r in 0..=s {
            let seed = &seeds[s - r];
            if seed.is_zero() {
                continue;
            }
            sa = &sa + &table.a[r].mul_param(seed);
            sb = &sb + &table.b[r].mul_param(seed);
        }
        hat_a.push(sa);
        hat_b.push(sb);
    }
    Ok((hat_a, hat_b))
}

/// Checks that `(a_s, b_s)` solve the recursion with the given `f`, in
/// constant-free (differentiated) form for the `A` equation. Returns the
/// first failing index and equation.
pub fn check_recursion(
    f: &CoeffPoly,
    a: &[CoeffPoly],
    b: &[CoeffPoly],
) -> std::result::Result<(), String> {
    let Some(first) = a.first() else {
        return Ok(());
    };
    let param = first.param();
    let k = two_mu_plus_one(param);
    let f = f.substitute_param(&ParamPoly::var(param));
    for s in 0..b.len().min(a.len()) {
        let da = a[s].derivative();
        let q = da.divide_by_z().map_err(|e| format!("A_{s}'/z: {e}"))?;
        let rhs = &(&f * &a[s]) - &q.mul_param(&k);
        let resid = &(&b[s].scale(&int(2)) + &da) - &rhs.integrate_from_zero();
        if !resid.is_zero() {
            return Err(format!("B_{s} equation residual {resid}"));
        }
        if s + 1 < a.len() {
            let bz = b[s].divide_by_z().map_err(|e| format!("B_{s}/z: {e}"))?;
            let inner = &bz.mul_param(&k) - &b[s].derivative();
            let resid =
                &(&a[s + 1].derivative().scale(&int(2)) - &inner.derivative()) - &(&f * &b[s]);
            if !resid.is_zero() {
                return Err(format!("A_{} equation residual {resid}", s + 1));
            }
        }
    }
    Ok(())
}

/// Every `A_s` even with `A_s(0) = 0` for `s ≥ 1`, every `B_s` odd.
pub fn check_normalization(table: &CoefficientTable) -> std::result::Result<(), String> {
    if !table.a[0].is_one() {
        return Err("A_0 != 1".into());
    }
    for (s, p) in table.a.iter().enumerate() {
        if p.observed_parity() != Parity::Even {
            return Err(format!("A_{s} is not even"));
        }
        if s >= 1 && !p.at_zero().is_zero() {
            return Err(format!("A_{s}(0) = {} != 0", p.at_zero()));
        }
    }
    for (s, p) in table.b.iter().enumerate() {
        if !p.is_zero() && p.observed_parity() != Parity::Odd {
            return Err(format!("B_{s} is not odd"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(order: usize) -> CoefficientTable {
        compute_coefficient_table(&f_confluent(Param::Mu), order).unwrap()
    }

    fn mu_poly(c: &[(i64, i64)]) -> ParamPoly {
        ParamPoly::new(Param::Mu, c.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    fn a1_expected() -> CoeffPoly {
        &CoeffPoly::monomial(mu_poly(&[(-1, 6), (1, 6)]), 2)
            + &CoeffPoly::monomial(mu_poly(&[(1, 72)]), 6)
    }

    #[test]
    fn first_coefficients() {
        let t = table(3);
        assert!(t.a()[0].is_one());
        assert_eq!(t.b()[0], CoeffPoly::monomial(mu_poly(&[(1, 6)]), 3));
        assert_eq!(t.a()[1], a1_expected());
    }

    #[test]
    fn recursion_resubstitutes() {
        let t = table(6);
        check_recursion(t.f(), t.a(), t.b()).unwrap();
        check_normalization(&t).unwrap();
    }

    #[test]
    fn wrong_coefficients_are_caught() {
        let t = table(3);
        let mut a = t.a().to_vec();
        a[2] = &a[2] + &CoeffPoly::monomial(ParamPoly::one(Param::Mu), 4);
        assert!(check_recursion(t.f(), &a, t.b()).is_err());
    }

    #[test]
    fn odd_f_rejected() {
        let f = CoeffPoly::monomial(ParamPoly::one(Param::Mu), 3);
        assert!(matches!(
            compute_coefficient_table(&f, 2),
            Err(Error::ParityViolation(_))
        ));
    }

    #[test]
    fn general_even_f() {
        // f = 1 + z^4 exercises the general path.
        let f = &CoeffPoly::one(Param::Mu) + &CoeffPoly::monomial(ParamPoly::one(Param::Mu), 4);
        let t = compute_coefficient_table(&f, 4).unwrap();
        check_recursion(t.f(), t.a(), t.b()).unwrap();
        check_normalization(&t).unwrap();
    }

    #[test]
    fn lowered_examples() {
        let t = table(4);
        let low = lower_coefficients(&t).unwrap();
        assert!(low.a[0].is_one());
        assert_eq!(low.b[0], CoeffPoly::monomial(mu_poly(&[(1, 6)]), 3));
        assert_eq!(low.a[1], a1_expected());
        check_recursion(t.f(), &low.a, &low.b).unwrap();
    }

    #[test]
    fn normalizer_examples() {
        let t = table(DEFAULT_ORDER);
        let f = normalizer_series(&t, Sign::Plus, 9).unwrap();
        assert!(f.coefficient(0).is_one());
        assert!(f.coefficient(1).is_zero());
        let g = normalizer_series(&t, Sign::Minus, 9).unwrap();
        let prod = f.series.mul(&g.series);
        assert_eq!(prod, TruncSeries::one(SeriesVar::InvU2, Param::Mu, 9));
        assert!(normalizer_series(&t, Sign::Plus, DEFAULT_ORDER + 2).is_err());
    }

    #[test]
    fn basis_shift() {
        let t = table(4);
        let unit = |v: &[i64]| -> Vec<ParamPoly> {
            v.iter()
                .map(|&c| ParamPoly::from_ints(Param::Mu, &[c]))
                .collect()
        };
        let (ha, hb) = shift_basis(&t, &unit(&[1, 0, 0, 0, 0])).unwrap();
        assert_eq!(ha, t.a());
        assert_eq!(hb, t.b());
        let (ha, _) = shift_basis(&t, &unit(&[1, 1, 0])).unwrap();
        assert_eq!(ha[1], &t.a()[1] + &CoeffPoly::one(Param::Mu));
        let seeds = vec![
            ParamPoly::one(Param::Mu),
            ParamPoly::var(Param::Mu),
            ParamPoly::from_ints(Param::Mu, &[3, 0, 1]),
            ParamPoly::from_ints(Param::Mu, &[-2]),
        ];
        let (ha, hb) = shift_basis(&t, &seeds).unwrap();
        for (s, p) in ha.iter().enumerate() {
            assert_eq!(p.at_zero(), seeds[s]);
        }
        check_recursion(t.f(), &ha, &hb).unwrap();
        assert!(matches!(
            shift_basis(&t, &unit(&[2])),
            Err(Error::InvalidSeed(_))
        ));
        assert!(shift_basis(&t, &[]).is_err());
    }

    #[test]
    fn param_b_view() {
        let t = table(2).in_param(Param::B);
        // A_1 = (b-2) z²/6 + z⁶/72
        let expect = &CoeffPoly::monomial(ParamPoly::new(Param::B, vec![rat(-1, 3), rat(1, 6)]), 2)
            + &CoeffPoly::monomial(ParamPoly::constant(Param::B, rat(1, 72)), 6);
        assert_eq!(t.a()[1], expect);
        assert_eq!(t.in_param(Param::Mu), table(2));
    }
}
