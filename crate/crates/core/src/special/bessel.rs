//! Modified Bessel functions `I_ν`, `K_ν` on the Riemann surface of the
//! logarithm.
//!
//! Arguments are reduced to a base angle `θ₀ ∈ (-π/2, π/2]`,
//! `θ = θ₀ + πm`, evaluated there, and carried back with
//!
//! - `I_ν(w e^{iπm}) = e^{iπνm} I_ν(w)`
//! - `K_ν(w e^{iπm}) = e^{-iπνm} K_ν(w) - πi·sin(πνm)/sin(πν)·I_ν(w)`.
//!
//! At the base point `I_ν` comes from its ascending series, or from the
//! large-argument expansion once the series would cancel beyond the
//! precision budget. `K_ν` uses Temme's series for `|w| ≤ 2` and Steed's
//! continued fraction otherwise, at order `|Re μ| ≤ ½`, then recurs upward.
//! This is uniform in `ν`, so integer orders need no special path.
//! The reflection form `π/(2 sin πν)·(I_{-ν} - I_ν)` is kept as an
//! independent route for non-integer orders.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::dd::DdComplex;
use super::gamma::{log_gamma, sin_ratio, RECIP_GAMMA_TAYLOR};
use super::logc::LogComplex;
use super::precision::{sum_ratio_series, Mode, Precision, SeriesScalar, SeriesSum};
use super::riemann::RiemannPoint;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Relative term size at which the large-argument expansion stops.
const HANKEL_TAIL: f64 = 1e-19;

fn is_integer(nu: Complex64) -> bool {
    nu.im == 0.0 && nu.re == nu.re.round()
}

/// `I_ν(w e^{iπm})` from `I_ν(w)`.
pub fn continue_i(nu: Complex64, m: i64, i_base: &LogComplex) -> LogComplex {
    i_base.mul_exp(I * PI * nu * m as f64)
}

/// `K_ν(w e^{iπm})` from `K_ν(w)` and `I_ν(w)`.
pub fn continue_k(nu: Complex64, m: i64, k_base: &LogComplex, i_base: &LogComplex) -> LogComplex {
    if m == 0 {
        return *k_base;
    }
    let k_part = k_base.mul_exp(-I * PI * nu * m as f64);
    let i_part = i_base.mul_complex(-I * PI * sin_ratio(nu, m));
    k_part.add(&i_part)
}

fn i_series<T: SeriesScalar>(nu: Complex64, w: Complex64, prec: &Precision) -> Result<SeriesSum> {
    let q = T::from_c64(0.25 * w * w);
    let nu_t = T::from_c64(nu);
    sum_ratio_series("bessel_i", prec, |k| {
        let k1 = T::real(k as f64 + 1.0);
        q / (k1 * (nu_t + k1))
    })
}

fn i_by_series(nu: Complex64, w: Complex64, prec: &Precision) -> Result<LogComplex> {
    let sum = match prec.mode {
        Mode::Double => i_series::<Complex64>(nu, w, prec)?,
        Mode::DoubleDouble => i_series::<DdComplex>(nu, w, prec)?,
    };
    let pre = nu * (0.5 * w).ln() - log_gamma(nu + 1.0)?;
    Ok(sum.value.mul_exp(pre))
}

/// Large-argument expansion; `base_theta` selects the side of the Stokes
/// line for the subdominant term.
fn i_by_hankel(
    nu: Complex64,
    w: Complex64,
    base_theta: f64,
    prec: &Precision,
) -> Result<LogComplex> {
    let mu4 = 4.0 * nu * nu;
    let mut ak = c(1.0);
    let mut inv_pow = c(1.0);
    let winv = w.inv();
    let (mut alt, mut plain) = (c(1.0), c(1.0));
    let mut last = f64::INFINITY;
    let mut converged = false;
    for k in 1..400 {
        let odd = (2 * k - 1) as f64;
        ak = ak * (mu4 - odd * odd) / (8.0 * k as f64);
        inv_pow *= winv;
        let t = ak * inv_pow;
        let tn = t.norm();
        if tn == 0.0 {
            converged = true;
            break;
        }
        if tn > last {
            break;
        }
        last = tn;
        plain += t;
        alt += if k % 2 == 1 { -t } else { t };
        if tn < HANKEL_TAIL {
            converged = true;
            break;
        }
    }
    if !converged && last > prec.accuracy_target {
        return Err(Error::PrecisionExhausted {
            kernel: "bessel_i",
            detail: format!(
                "large-argument expansion stalls at relative size {last:.2e} for |w| = {}",
                w.norm()
            ),
        });
    }
    let sign = if base_theta >= 0.0 { 1.0 } else { -1.0 };
    let half_ln = 0.5 * (2.0 * PI * w).ln();
    let dominant = LogComplex::exp(w - half_ln).mul_complex(alt);
    let sub = LogComplex::exp(-w - half_ln + I * sign * PI * nu).mul_complex(I * sign * plain);
    Ok(dominant.add(&sub))
}

/// `I_ν(w)` for `w` on the base sheet `arg w ∈ (-π/2, π/2]`.
pub fn i_at_base(
    nu: Complex64,
    w: Complex64,
    base_theta: f64,
    prec: &Precision,
) -> Result<LogComplex> {
    let nu = if is_integer(nu) && nu.re < 0.0 {
        -nu
    } else {
        nu
    };
    let ulp = match prec.mode {
        Mode::Double => Complex64::UNIT_ROUNDOFF,
        Mode::DoubleDouble => DdComplex::UNIT_ROUNDOFF,
    };
    let series_err = ulp.ln() + (w.norm() - w.re);
    let hankel_err = if w.norm() > 2.0 {
        -2.0 * w.norm()
    } else {
        f64::INFINITY
    };
    if series_err <= hankel_err {
        i_by_series(nu, w, prec)
    } else {
        i_by_hankel(nu, w, base_theta, prec)
    }
}

/// `1/Γ(1+μ)`, `1/Γ(1-μ)` and Temme's `γ₁`, `γ₂` for `|μ| ≲ 1`.
fn temme_gammas(mu: Complex64) -> (Complex64, Complex64, Complex64, Complex64) {
    // g(x) = Σ e_j x^j = 1/Γ(1+x); γ₁ = (g(-μ) - g(μ))/(2μ), γ₂ = (g(-μ) + g(μ))/2
    let mut gam1 = c(0.0);
    let mut gam2 = c(0.0);
    let mut pow = c(1.0);
    for (j, &e) in RECIP_GAMMA_TAYLOR.iter().enumerate() {
        if j % 2 == 0 {
            gam2 += pow * e;
        } else {
            gam1 -= pow * e;
            pow *= mu * mu;
        }
    }
    (gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1)
}

/// `(K_μ, K_{μ+1}, ln scale)` with `|Re μ| ≤ ½`; true values are the first
/// two times `exp(ln scale)`.
fn k_low_pair(mu: Complex64, x: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
    const EPS: f64 = 1e-17;
    const MAXIT: usize = 100_000;
    if x.norm() <= 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.norm() < 1e-15 {
            c(1.0)
        } else {
            pimu / pimu.sin()
        };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.norm() < 1e-15 {
            c(1.0)
        } else {
            e.sinh() / e
        };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut cc = c(1.0);
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut i = 1;
        loop {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu * mu);
            cc *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = cc * ff;
            sum += del;
            sum1 += cc * (p - fi * ff);
            if del.norm() < sum.norm() * EPS {
                break;
            }
            i += 1;
            if i > MAXIT {
                return Err(Error::PrecisionExhausted {
                    kernel: "bessel_k",
                    detail: "small-argument series".into(),
                });
            }
        }
        Ok((sum, sum1 * 2.0 / x, c(0.0)))
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = b.inv();
        let mut delh = d;
        let mut h = d;
        let mut q1 = c(0.0);
        let mut q2 = c(1.0);
        let a1 = 0.25 - mu * mu;
        let mut q = a1;
        let mut cc = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 2..=MAXIT {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            cc = -a * cc / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += cc * qnew;
            // cc grows factorially while q1, q2 decay; only their product
            // enters the sum, so trade scale between them.
            if cc.norm() > 1e150 {
                cc *= 1e-150;
                q1 *= 1e150;
                q2 *= 1e150;
            }
            b += 2.0;
            d = (b + a * d).inv();
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).norm() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::PrecisionExhausted {
                kernel: "bessel_k",
                detail: "continued fraction".into(),
            });
        }
        h *= a1;
        let kmu = (PI / (2.0 * x)).sqrt() / s;
        let k1 = kmu * (mu + x + 0.5 - h) / x;
        Ok((kmu, k1, -x))
    }
}

/// `K_ν(w)` for `w` on the base sheet.
pub fn k_at_base(nu: Complex64, w: Complex64) -> Result<LogComplex> {
    let nu = if nu.re < 0.0 { -nu } else { nu };
    let n = nu.re.round();
    let mu = nu - n;
    let (mut k0, mut k1, scale) = k_low_pair(mu, w)?;
    for j in 0..n as i64 {
        let next = k0 + 2.0 * (mu + j as f64 + 1.0) / w * k1;
        k0 = k1;
        k1 = next;
    }
    Ok(LogComplex::from_complex(k0).mul_exp(scale))
}

/// `π/(2 sin πν)·(I_{-ν}(w) - I_ν(w))` at the base point; non-integer `ν` only.
pub fn k_reflection_at_base(
    nu: Complex64,
    w: Complex64,
    base_theta: f64,
    prec: &Precision,
) -> Result<LogComplex> {
    if is_integer(nu) {
        return Err(Error::Domain(format!(
            "reflection form needs non-integer order, got {nu}"
        )));
    }
    let ip = i_at_base(nu, w, base_theta, prec)?;
    let im = i_at_base(-nu, w, base_theta, prec)?;
    Ok(im.sub(&ip).mul_complex(0.5 * PI / (PI * nu).sin()))
}

pub fn bessel_i(nu: Complex64, z: &RiemannPoint, prec: &Precision) -> Result<LogComplex> {
    let red = z.reduce_half_turns();
    let base = i_at_base(nu, red.base, red.base_theta, prec)?;
    Ok(continue_i(nu, red.m, &base))
}

pub fn bessel_k(nu: Complex64, z: &RiemannPoint, prec: &Precision) -> Result<LogComplex> {
    let red = z.reduce_half_turns();
    let k = k_at_base(nu, red.base)?;
    if red.m == 0 {
        return Ok(k);
    }
    let i = i_at_base(nu, red.base, red.base_theta, prec)?;
    Ok(continue_k(nu, red.m, &k, &i))
}

/// [`bessel_k`] with the base value taken from the reflection form.
pub fn bessel_k_reflection(
    nu: Complex64,
    z: &RiemannPoint,
    prec: &Precision,
) -> Result<LogComplex> {
    let red = z.reduce_half_turns();
    let k = k_reflection_at_base(nu, red.base, red.base_theta, prec)?;
    if red.m == 0 {
        return Ok(k);
    }
    let i = i_at_base(nu, red.base, red.base_theta, prec)?;
    Ok(continue_k(nu, red.m, &k, &i))
}
