//! Both sides of the Bessel-basis expansions of `M(a, b, z²)` and
//! `U(a, b, z²)` with `a = u²/4 + b/2`, and the measured discrepancy between
//! them.
//!
//! The coefficient polynomials enter only through
//! [`CoeffPoly::evaluate`](crate::ratpoly::CoeffPoly::evaluate); the
//! functions on the left come from the oracles in [`crate::special`].

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::olver::{
    compute_coefficient_table, f_confluent, lower_coefficients, CoefficientTable,
    LoweredCoefficients,
};
use crate::ratpoly::rational::to_f64;
use crate::ratpoly::{BigRational, CoeffPoly, Param, ParamPoly};
use crate::special::{
    bessel_i, bessel_k, kummer_m, kummer_u_scaled, log_gamma, log_gamma_ratio, LogComplex,
    Precision, RiemannPoint,
};
use crate::temme::gamma_ratio_coefficients;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Fewest `(t, discrepancy)` points a slope fit uses.
pub const MIN_FIT_POINTS: usize = 3;

/// Which expansion is assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    /// `M` in the `I` basis with `A_s`, `B_s`.
    M,
    /// `U` in the `K` basis with `A_s`, `B_s` and the `Γ(1+a-b)` prefactor.
    UCapital,
    /// `U` in the `K` basis with `a_s`, `b_s` and the `Γ(a)` prefactor.
    ULower,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::M => "m",
            Variant::UCapital => "u-capital",
            Variant::ULower => "u-lower",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m" | "M" => Ok(Variant::M),
            "u-capital" | "U" => Ok(Variant::UCapital),
            "u-lower" | "u" => Ok(Variant::ULower),
            _ => Err(Error::Parse(format!(
                "unknown variant {s:?} (expected m, u-capital or u-lower)"
            ))),
        }
    }
}

/// One evaluation point. `u = t·e^{iθ_u}`; `a` is always derived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionConfig {
    pub variant: Variant,
    pub b: Complex64,
    pub t: f64,
    pub u_theta: f64,
    pub z: RiemannPoint,
    pub n: usize,
    pub prec: Precision,
}

impl ExpansionConfig {
    pub fn u(&self) -> Complex64 {
        Complex64::from_polar(self.t, self.u_theta)
    }

    pub fn ln_u(&self) -> Complex64 {
        Complex64::new(self.t.ln(), self.u_theta)
    }

    pub fn a(&self) -> Complex64 {
        let u = self.u();
        0.25 * u * u + 0.5 * self.b
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Domain(
                "truncation order N must be at least 1".into(),
            ));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::Domain(format!("t must be positive, got {}", self.t)));
        }
        match self.variant {
            Variant::M => {
                if self.b.im == 0.0 && self.b.re <= 0.0 && self.b.re == self.b.re.round() {
                    return Err(Error::Domain(format!(
                        "b = {} is 0 or a negative integer",
                        self.b
                    )));
                }
            }
            Variant::UCapital | Variant::ULower => {
                if self.u_theta.abs() >= 0.5 * PI {
                    return Err(Error::Domain(format!(
                        "|arg u| = {} must be below pi/2",
                        self.u_theta.abs()
                    )));
                }
                if self.a().re <= 0.0 {
                    return Err(Error::Domain(format!(
                        "Re a = {} must be positive",
                        self.a().re
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Left side, right side and `|lhs/rhs - 1|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SideBySide {
    pub lhs: LogComplex,
    pub rhs: LogComplex,
    pub discrepancy: f64,
}

impl SideBySide {
    pub fn new(lhs: LogComplex, rhs: LogComplex) -> Result<Self> {
        let discrepancy = lhs.rel_discrepancy(&rhs);
        if discrepancy.is_nan() || !lhs.is_finite() || !rhs.is_finite() {
            return Err(Error::Internal(format!(
                "non-finite side: lhs {lhs}, rhs {rhs}"
            )));
        }
        Ok(SideBySide {
            lhs,
            rhs,
            discrepancy,
        })
    }
}

/// Exact coefficient data for truncation orders up to `max_n`.
#[derive(Clone, Debug)]
pub struct ExpansionCoefficients {
    table: CoefficientTable,
    lowered: LoweredCoefficients,
    ratio: Vec<ParamPoly>,
    max_n: usize,
}

impl ExpansionCoefficients {
    pub fn new(max_n: usize) -> Result<Self> {
        let max_n = max_n.max(1);
        let table = compute_coefficient_table(&f_confluent(Param::Mu), max_n)?;
        let lowered = lower_coefficients(&table)?;
        let (ratio, _) = gamma_ratio_coefficients(max_n)?;
        Ok(ExpansionCoefficients {
            table,
            lowered,
            ratio,
            max_n,
        })
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::OrderStarvation {
                required: n,
                available: self.max_n,
            });
        }
        Ok(())
    }

    fn pair(&self, variant: Variant) -> (&[CoeffPoly], &[CoeffPoly]) {
        match variant {
            Variant::M | Variant::UCapital => (self.table.a(), self.table.b()),
            Variant::ULower => (&self.lowered.a, &self.lowered.b),
        }
    }
}

/// `Σ_{s<N} p_s(z)/u^{2s}` with the parameter polynomials in `μ = b - 1`.
fn truncated_sum(
    polys: &[CoeffPoly],
    n: usize,
    b: Complex64,
    z: Complex64,
    u: Complex64,
) -> Complex64 {
    let inv_u2 = (u * u).inv();
    let mut acc = Complex64::new(0.0, 0.0);
    for p in polys[..n].iter().rev() {
        let pv = match p.param() {
            Param::Mu => b - 1.0,
            Param::B => b,
        };
        acc = acc * inv_u2 + p.evaluate(pv, z);
    }
    acc
}

/// `ln(e^{-z²/2} z^b)` with the full winding of `z`.
fn ln_gauss_power(b: Complex64, z: &RiemannPoint) -> Complex64 {
    let zv = z.value();
    -0.5 * zv * zv + b * z.ln()
}

/// `u z` as a point on the Riemann surface.
fn bessel_argument(cfg: &ExpansionConfig) -> Result<RiemannPoint> {
    RiemannPoint::new(cfg.t * cfg.z.r, cfg.z.theta + cfg.u_theta)
}

/// `ln W₃ = ln(2^{1-b} u^{b-1}/Γ(b) · e^{-z²/2} z^b M(a, b, z²))`.
fn m_lhs(cfg: &ExpansionConfig) -> Result<LogComplex> {
    let b = cfg.b;
    let zv = cfg.z.value();
    let m = kummer_m(cfg.a(), b, zv * zv, &cfg.prec)?;
    let ln_pref =
        (1.0 - b) * 2f64.ln() + (b - 1.0) * cfg.ln_u() - log_gamma(b)? + ln_gauss_power(b, &cfg.z);
    Ok(m.mul_exp(ln_pref))
}

/// Both sides of the `M` expansion in the `I` basis.
pub fn eval_m_sides(cfg: &ExpansionConfig, coeffs: &ExpansionCoefficients) -> Result<SideBySide> {
    if cfg.variant != Variant::M {
        return Err(Error::Domain(format!(
            "eval_m_sides needs variant m, got {}",
            cfg.variant
        )));
    }
    cfg.validate()?;
    coeffs.check(cfg.n)?;
    let lhs = m_lhs(cfg)?;
    let uz = bessel_argument(cfg)?;
    let (ca, cb) = coeffs.pair(cfg.variant);
    let (u, zv) = (cfg.u(), cfg.z.value());
    let sa = truncated_sum(ca, cfg.n, cfg.b, zv, u);
    let sb = truncated_sum(cb, cfg.n, cfg.b, zv, u);
    let i0 = bessel_i(cfg.b - 1.0, &uz, &cfg.prec)?;
    let i1 = bessel_i(cfg.b, &uz, &cfg.prec)?;
    let rhs = i0.mul_complex(zv * sa).add(&i1.mul_complex(zv / u * sb));
    SideBySide::new(lhs, rhs)
}

/// Both sides of the `U` expansion in the `K` basis.
pub fn eval_u_sides(cfg: &ExpansionConfig, coeffs: &ExpansionCoefficients) -> Result<SideBySide> {
    if cfg.variant == Variant::M {
        return Err(Error::Domain(
            "eval_u_sides needs variant u-capital or u-lower".into(),
        ));
    }
    cfg.validate()?;
    coeffs.check(cfg.n)?;
    let (a, b) = (cfg.a(), cfg.b);
    let x = cfg.z.square();
    // Γ(a) U(a, b, x)
    let gu = kummer_u_scaled(a, b, &x, &cfg.prec)?;
    let ln_pref = match cfg.variant {
        Variant::UCapital => log_gamma_ratio(a, 1.0 - b)? - b * 2f64.ln() + (b - 1.0) * cfg.ln_u(),
        _ => (b - 2.0) * 2f64.ln() + (1.0 - b) * cfg.ln_u(),
    };
    let lhs = gu.mul_exp(ln_pref + ln_gauss_power(b, &cfg.z));
    let uz = bessel_argument(cfg)?;
    let (ca, cb) = coeffs.pair(cfg.variant);
    let (u, zv) = (cfg.u(), cfg.z.value());
    let sa = truncated_sum(ca, cfg.n, b, zv, u);
    let sb = truncated_sum(cb, cfg.n, b, zv, u);
    let k0 = bessel_k(b - 1.0, &uz, &cfg.prec)?;
    let k1 = bessel_k(b, &uz, &cfg.prec)?;
    let rhs = k0.mul_complex(zv * sa).sub(&k1.mul_complex(zv / u * sb));
    SideBySide::new(lhs, rhs)
}

/// Dispatches on the variant.
pub fn eval_sides(cfg: &ExpansionConfig, coeffs: &ExpansionCoefficients) -> Result<SideBySide> {
    match cfg.variant {
        Variant::M => eval_m_sides(cfg, coeffs),
        _ => eval_u_sides(cfg, coeffs),
    }
}

/// `d(b)`, exact then rounded once for real `b`, so coefficients that vanish
/// at `b` come out as exact zeros.
fn ratio_coefficient(d: &ParamPoly, b: Complex64) -> Complex64 {
    match (b.im == 0.0)
        .then(|| BigRational::from_float(b.re))
        .flatten()
    {
        Some(q) => Complex64::new(to_f64(&d.eval_rational(&q)), 0.0),
        None => d.eval_complex(b),
    }
}

/// `Γ(1+a-b)/Γ(a) · (u²/4)^{b-1}` against `Σ_{n≤N} d_n u^{-2n}` for real
/// `u > 0`.
pub fn gamma_ratio_check(
    b: Complex64,
    u: f64,
    n: usize,
    coeffs: &ExpansionCoefficients,
) -> Result<SideBySide> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::Domain(format!("u must be positive, got {u}")));
    }
    coeffs.check(n)?;
    let q = 0.25 * u * u;
    let a = Complex64::new(q, 0.0) + 0.5 * b;
    if a.re <= 0.0 {
        return Err(Error::Domain(format!("Re a = {} must be positive", a.re)));
    }
    // u²/4 is recovered from the rounded `a` and its log is taken in the
    // same form as the integer-shift product, so the two cancel bit for bit
    // at b = 2.
    let ln_q = (a - 0.5 * b).ln();
    let lhs = LogComplex::exp(log_gamma_ratio(a, 1.0 - b)? + (b - 1.0) * ln_q);
    let inv_u2 = 1.0 / (u * u);
    let mut acc = Complex64::new(0.0, 0.0);
    for d in coeffs.ratio[..=n].iter().rev() {
        acc = acc * inv_u2 + ratio_coefficient(d, b);
    }
    SideBySide::new(lhs, LogComplex::from_complex(acc))
}

/// Left side of the `M` expansion at `z e^{iπ}` against `e^{iπb}` times the
/// left side at `z`.
pub fn floquet_check(cfg: &ExpansionConfig) -> Result<SideBySide> {
    cfg.validate()?;
    let here = m_lhs(cfg)?;
    let turned = ExpansionConfig {
        z: cfg.z.rotate_half_turns(1),
        ..*cfg
    };
    let there = m_lhs(&turned)?;
    SideBySide::new(there, here.mul_exp(I * PI * cfg.b))
}

/// One evaluated sweep point.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub cfg: ExpansionConfig,
    pub outcome: std::result::Result<SideBySide, String>,
}

/// Least-squares slope of `ln discrepancy` against `ln t` for one group.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    pub variant: Variant,
    pub b: Complex64,
    pub z: RiemannPoint,
    pub u_theta: f64,
    pub n: usize,
    pub slope: f64,
    pub points: usize,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub fits: Vec<SlopeFit>,
}

/// Least-squares slope through `(x, y)`; `None` below [`MIN_FIT_POINTS`].
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < MIN_FIT_POINTS {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

fn same_group(a: &ExpansionConfig, b: &ExpansionConfig) -> bool {
    a.variant == b.variant && a.b == b.b && a.z == b.z && a.u_theta == b.u_theta && a.n == b.n
}

/// Evaluates every point (in parallel, results in input order) and fits a
/// decay slope for each `(variant, b, z, θ_u, N)` group. A failing point is
/// recorded in its row and left out of the fit.
pub fn decay_sweep(
    grid: &[ExpansionConfig],
    coeffs: &ExpansionCoefficients,
) -> Result<SweepReport> {
    if grid.is_empty() {
        return Err(Error::Domain("sweep grid is empty".into()));
    }
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|cfg| SweepRow {
            cfg: *cfg,
            outcome: eval_sides(cfg, coeffs).map_err(|e| e.to_string()),
        })
        .collect();
    let mut fits = Vec::new();
    let mut seen: Vec<ExpansionConfig> = Vec::new();
    for row in &rows {
        if seen.iter().any(|c| same_group(c, &row.cfg)) {
            continue;
        }
        seen.push(row.cfg);
        let points: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| same_group(&r.cfg, &row.cfg))
            .filter_map(|r| match &r.outcome {
                Ok(s) if s.discrepancy > 0.0 => Some((r.cfg.t.ln(), s.discrepancy.ln())),
                _ => None,
            })
            .collect();
        if let Some(slope) = fit_slope(&points) {
            fits.push(SlopeFit {
                variant: row.cfg.variant,
                b: row.cfg.b,
                z: row.cfg.z,
                u_theta: row.cfg.u_theta,
                n: row.cfg.n,
                slope,
                points: points.len(),
            });
        }
    }
    Ok(SweepReport { rows, fits })
}

/// The pinned acceptance grid for one variant: `b ∈ {0.7, 1.5, 2.5}`,
/// `|z| ∈ {0.5, 1, 2}`, `arg z ∈ {0, π, 2π, 5π/2}`, `t ∈ {10, 20, 40}`,
/// `arg u ∈ {0, 0.3}`, `N ∈ {1, 2, 3}`.
pub fn acceptance_grid(variant: Variant, prec: Precision) -> Vec<ExpansionConfig> {
    let mut grid = Vec::new();
    for b in [0.7, 1.5, 2.5] {
        for r in [0.5, 1.0, 2.0] {
            for theta in [0.0, PI, 2.0 * PI, 2.5 * PI] {
                for u_theta in [0.0, 0.3] {
                    for n in 1..=3 {
                        for t in [10.0, 20.0, 40.0] {
                            grid.push(ExpansionConfig {
                                variant,
                                b: Complex64::new(b, 0.0),
                                t,
                                u_theta,
                                z: RiemannPoint::new(r, theta).expect("grid radius is positive"),
                                n,
                                prec,
                            });
                        }
                    }
                }
            }
        }
    }
    grid
}

/// Column names of the sweep CSV.
pub const CSV_HEADER: [&str; 14] = [
    "variant",
    "b_re",
    "b_im",
    "z_r",
    "z_theta",
    "t",
    "u_theta",
    "N",
    "lhs_logmag",
    "lhs_phase",
    "rhs_logmag",
    "rhs_phase",
    "rel_discrepancy",
    "status",
];

/// A float at 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the sweep rows as CSV.
pub fn write_csv(rows: &[SweepRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        let c = &row.cfg;
        let mut rec = vec![
            c.variant.name().to_string(),
            fmt_f64(c.b.re),
            fmt_f64(c.b.im),
            fmt_f64(c.z.r),
            fmt_f64(c.z.theta),
            fmt_f64(c.t),
            fmt_f64(c.u_theta),
            c.n.to_string(),
        ];
        match &row.outcome {
            Ok(s) => {
                // Phases are printed reduced so the two sides compare directly.
                let (lhs, rhs) = (s.lhs.principal(), s.rhs.principal());
                rec.extend(
                    [lhs.logmag, lhs.phase, rhs.logmag, rhs.phase, s.discrepancy].map(fmt_f64),
                );
                rec.push("ok".into());
            }
            Err(e) => {
                rec.extend(std::iter::repeat_n(String::new(), 5));
                rec.push(format!("error: {e}"));
            }
        }
        w.write_record(&rec).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Internal(format!("csv: {e}")))?;
    Ok(())
}
