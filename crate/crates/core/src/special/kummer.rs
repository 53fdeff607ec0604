//! Kummer functions `M(a, b, x)` and `U(a, b, x)`.
//!
//! `M` is summed from its power series. `U` is obtained as `Γ(a)·U` from
//! `∫_0^∞ e^{-xt} t^{a-1} (1+t)^{b-a-1} dt` on the base sheet
//! `arg x ∈ (-π, π]` and carried to other sheets by the monodromy relation
//! `U(a, b, x e^{2πi}) = e^{-2πib} U + 2πi e^{-πib}/(Γ(b)Γ(1+a-b))·M`.
//! The integration ray is turned towards the saddle of the integrand. Near
//! `arg x = ±π` with complex or large `a` the saddle can fall outside the
//! sector of convergent rays; there the connection formula in two `M`
//! series takes over. That formula is also kept as an independent route; it
//! cancels badly once `a|x|` is large.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::dd::DdComplex;
use super::gamma::{is_pole, ln1p, log_gamma, log_gamma_ratio, recip_gamma, sin_ratio};
use super::logc::LogComplex;
use super::precision::{sum_ratio_series, Mode, Precision, SeriesScalar, SeriesSum};
use super::quad::integrate;
use super::riemann::RiemannPoint;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Keeps the integration ray this far inside the convergence sector.
const RAY_MARGIN: f64 = 0.15;
const MAX_PIECES: usize = 4000;
const MAX_SEGMENTS: usize = 400;

fn m_series<T: SeriesScalar>(
    a: Complex64,
    b: Complex64,
    x: Complex64,
    prec: &Precision,
) -> Result<SeriesSum> {
    let (at, bt, xt) = (T::from_c64(a), T::from_c64(b), T::from_c64(x));
    sum_ratio_series("kummer_m", prec, |n| {
        let nt = T::real(n as f64);
        (at + nt) * xt / ((bt + nt) * T::real(n as f64 + 1.0))
    })
}

/// `M(a, b, x) = Σ (a)_n/(b)_n · xⁿ/n!`.
pub fn kummer_m(a: Complex64, b: Complex64, x: Complex64, prec: &Precision) -> Result<LogComplex> {
    if is_pole(b) {
        return Err(Error::Domain(format!(
            "M(a, b, x) needs b off the non-positive integers, got b = {b}"
        )));
    }
    let sum = match prec.mode {
        Mode::Double => m_series::<Complex64>(a, b, x, prec)?,
        Mode::DoubleDouble => m_series::<DdComplex>(a, b, x, prec)?,
    };
    Ok(sum.value)
}

/// How the base-sheet value of `U` is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum URoute {
    /// The integral along a ray through the saddle; the default.
    Quadrature,
    /// The connection formula in two `M` series.
    Connection,
}

fn near_integer(b: Complex64) -> bool {
    b.im.abs() < 1e-12 && (b.re - b.re.round()).abs() < 1e-8
}

/// Log of the integrand `t^{a-1}(1+t)^{b-a-1}e^{-xt}`, arranged so that no
/// two large terms cancel.
fn log_integrand(a: Complex64, b: Complex64, x: Complex64, t: Complex64) -> Complex64 {
    -x * t - (a - 1.0) * ln1p(t.inv()) + (b - 2.0) * ln1p(t)
}

/// Root of `x t² + (x - b + 2) t - (a - 1) = 0` with the larger real part:
/// the stationary point of the log-integrand.
fn saddle(a: Complex64, b: Complex64, x: Complex64) -> Complex64 {
    let p = x - b + 2.0;
    let disc = (p * p + 4.0 * x * (a - 1.0)).sqrt();
    let r1 = (-p + disc) / (2.0 * x);
    let r2 = (-p - disc) / (2.0 * x);
    if r1.re >= r2.re {
        r1
    } else {
        r2
    }
}

/// `Γ(a)·U(a, b, x)` by quadrature along the ray `t = s e^{iφ}`.
fn gamma_u_quadrature(
    a: Complex64,
    b: Complex64,
    x: Complex64,
    prec: &Precision,
) -> Result<LogComplex> {
    let theta = x.arg();
    let t_star = saddle(a, b, x);
    let lo = -PI / 2.0 + RAY_MARGIN - theta;
    let hi = PI / 2.0 - RAY_MARGIN - theta;
    let (lo, hi) = (lo.max(-PI + RAY_MARGIN), hi.min(PI - RAY_MARGIN));
    if lo > hi {
        return Err(Error::Domain(format!(
            "no convergent integration ray for arg x = {theta}"
        )));
    }
    let phi = if t_star.norm() > 1e-300 {
        t_star.arg().clamp(lo, hi)
    } else {
        0.0_f64.clamp(lo, hi)
    };
    let dir = Complex64::from_polar(1.0, phi);
    let decay = (x * dir).re;
    let s_star = (t_star * dir.conj()).re;
    let split = s_star.max(1.0 / decay);
    let ln_at = |s: f64| log_integrand(a, b, x, dir * s);
    let l_ref = ln_at(split);
    // Width of the peak, for the segment lengths above the split.
    let t_split = dir * split;
    let curv = (dir
        * dir
        * (-(a - 1.0) / (t_split * t_split) - (b - a - 1.0) / ((1.0 + t_split) * (1.0 + t_split))))
        .norm();
    let width = (1.0 / curv.sqrt())
        .max(1.0 / decay)
        .min(split.max(1.0 / decay));

    // Below the split: s = split·y^p tames t^{a-1} at the origin.
    let p = if a.re < 1.0 { (2.0 / a.re).ceil() } else { 1.0 };
    let lower = integrate(
        |y: f64| {
            if y <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let s = split * y.powf(p);
            let jac = (p * split).ln() + (p - 1.0) * y.ln();
            (ln_at(s) - l_ref + jac).exp()
        },
        0.0,
        1.0,
        prec.quad_tol,
        0.0,
        MAX_PIECES,
    )?;
    let mut total = lower.value;
    let mut start = split;
    let mut h = 2.0 * width;
    let mut done = false;
    for _ in 0..MAX_SEGMENTS {
        let end = start + h;
        let seg = integrate(
            |s: f64| (ln_at(s) - l_ref).exp(),
            start,
            end,
            prec.quad_tol,
            0.1 * prec.quad_tol * total.norm(),
            MAX_PIECES,
        )?;
        total += seg.value;
        let edge = (ln_at(end) - l_ref).re;
        if seg.value.norm() <= 1e-3 * prec.quad_tol * total.norm() && edge < -60.0 {
            done = true;
            break;
        }
        start = end;
        h *= 2.0;
    }
    if !done {
        return Err(Error::Quadrature(format!(
            "tail of the U integral not exhausted at s = {start}"
        )));
    }
    if total.norm() == 0.0 {
        return Err(Error::Quadrature(
            "integral vanished in double precision".into(),
        ));
    }
    Ok(LogComplex::exp(l_ref).mul_complex(dir * total))
}

/// `Γ(a)·U(a, b, x)` from `M(a, b, x)` and `x^{1-b} M(a-b+1, 2-b, x)`;
/// `ln_x` carries the full winding of `x`.
fn gamma_u_connection(
    a: Complex64,
    b: Complex64,
    ln_x: Complex64,
    prec: &Precision,
) -> Result<LogComplex> {
    if near_integer(b) {
        return Err(Error::Domain(format!(
            "connection formula needs non-integer b, got {b}"
        )));
    }
    let x = ln_x.exp();
    let one = Complex64::new(1.0, 0.0);
    // Γ(a)Γ(1-b)/Γ(a-b+1)
    let c1 = LogComplex::exp(log_gamma(one - b)? - log_gamma_ratio(a, one - b)?);
    let m1 = kummer_m(a, b, x, prec)?;
    let c2 = LogComplex::exp(log_gamma(b - 1.0)? + (one - b) * ln_x);
    let m2 = kummer_m(a - b + 1.0, 2.0 - b, x, prec)?;
    let (t1, t2) = (c1.mul(&m1), c2.mul(&m2));
    let sum = t1.add(&t2);
    // The two terms carry double-precision prefactors, so their
    // cancellation is charged against the double budget.
    let cancel = t1.logmag.max(t2.logmag) - sum.logmag;
    let budget = Precision::double().cancellation_budget();
    if cancel > budget {
        return Err(Error::PrecisionExhausted {
            kernel: "kummer_u connection",
            detail: format!("terms cancel by e^{cancel:.1}, beyond e^{budget:.1}"),
        });
    }
    Ok(sum)
}

/// `Γ(a)·U` after `m` turns, from its value `base` at `base_x` on the base
/// sheet. Negative `m` inverts the forward step.
pub fn apply_monodromy(
    a: Complex64,
    b: Complex64,
    base_x: Complex64,
    base: LogComplex,
    m: i64,
    prec: &Precision,
) -> Result<LogComplex> {
    if m == 0 {
        return Ok(base);
    }
    let one = Complex64::new(1.0, 0.0);
    // m turns at once: the M coefficient is Γ(a)·2πi e^{-πimb}/(Γ(b)Γ(1+a-b))
    // times sin(πmb)/sin(πb), which vanishes exactly when it should.
    let ratio = sin_ratio(b, m);
    if ratio.re == 0.0 && ratio.im == 0.0 {
        return Ok(base.mul_exp(-2.0 * PI * I * b * m as f64));
    }
    let coef = recip_gamma(b)
        .mul_exp(-log_gamma_ratio(a, one - b)? - I * PI * b * m as f64)
        .mul_complex(2.0 * PI * I * ratio);
    let m_term = coef.mul(&kummer_m(a, b, base_x, prec)?);
    Ok(base.mul_exp(-2.0 * PI * I * b * m as f64).add(&m_term))
}

/// `Γ(a)·U(a, b, x)` on the full Riemann surface, via `route` on the base
/// sheet and monodromy across turns.
pub fn kummer_u_scaled_with(
    a: Complex64,
    b: Complex64,
    x: &RiemannPoint,
    prec: &Precision,
    route: URoute,
) -> Result<LogComplex> {
    if a.re <= 0.0 {
        return Err(Error::Domain(format!(
            "U(a, b, x) needs Re a > 0, got a = {a}"
        )));
    }
    let red = x.reduce_full_turns();
    let base_ln = Complex64::new(x.r.ln(), red.base_theta);
    let base = match route {
        URoute::Quadrature => gamma_u_quadrature(a, b, red.base, prec)?,
        URoute::Connection => gamma_u_connection(a, b, base_ln, prec)?,
    };
    apply_monodromy(a, b, red.base, base, red.m, prec)
}

/// `Γ(a)·U(a, b, x)`. Quadrature first; where the saddle lies outside the
/// sector of convergent rays (arg x near ±π with complex or large `a`) the
/// quadrature reports non-convergence and the connection formula is tried.
pub fn kummer_u_scaled(
    a: Complex64,
    b: Complex64,
    x: &RiemannPoint,
    prec: &Precision,
) -> Result<LogComplex> {
    match kummer_u_scaled_with(a, b, x, prec, URoute::Quadrature) {
        Err(quad @ Error::Quadrature(_)) => {
            match kummer_u_scaled_with(a, b, x, prec, URoute::Connection) {
                Err(Error::Domain(_)) => Err(quad),
                other => other,
            }
        }
        other => other,
    }
}

pub fn kummer_u(
    a: Complex64,
    b: Complex64,
    x: &RiemannPoint,
    prec: &Precision,
) -> Result<LogComplex> {
    let g = kummer_u_scaled(a, b, x, prec)?;
    Ok(g.mul_exp(-log_gamma(a)?))
}

/// `U` from the connection formula evaluated directly at the wound point,
/// with no quadrature and no monodromy step: an independent route.
pub fn kummer_u_connection(
    a: Complex64,
    b: Complex64,
    x: &RiemannPoint,
    prec: &Precision,
) -> Result<LogComplex> {
    let g = gamma_u_connection(a, b, x.ln(), prec)?;
    Ok(g.mul_exp(-log_gamma(a)?))
}
