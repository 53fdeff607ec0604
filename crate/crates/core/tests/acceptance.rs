//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use kummer_asym::expansion::{
    eval_sides, fit_slope, gamma_ratio_check, ExpansionCoefficients, ExpansionConfig, Variant,
};
use kummer_asym::identities::{self, SuiteData};
use kummer_asym::special::bessel::{continue_i, continue_k};
use kummer_asym::special::kummer::{kummer_u_scaled_with, URoute};
use kummer_asym::special::{
    apply_monodromy, bessel_i, bessel_k, kummer_u_scaled, log_gamma, LogComplex, Precision,
    RiemannPoint,
};
use num_complex::Complex64;

const IDENTITY_DEPTH: usize = 8;
const IDENTITY_BUDGET_SECS: f64 = 60.0;
const WRONSKIAN_TOL: f64 = 1e-12;
const CONTINUATION_TOL: f64 = 1e-10;
const HALF_ORDER_TOL: f64 = 1e-12;
const ORACLE_TOL: f64 = 1e-10;
const M_TOL: f64 = 1e-6;
const U_TOL: f64 = 1e-5;
const WOUND_U_TOL: f64 = 1e-4;
const RATIO_TOL: f64 = 1e-10;
const SLOPE_REL_TOL: f64 = 0.10;
const T_GRID: [f64; 3] = [10.0, 20.0, 40.0];
const REF_T: f64 = 20.0;
const REF_B: f64 = 1.5;

type Verdict = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn pt(r: f64, theta: f64) -> RiemannPoint {
    RiemannPoint::new(r, theta).expect("valid point")
}

fn dd() -> Precision {
    Precision::double_double()
}

fn worst(acc: &mut (f64, String), d: f64, what: impl FnOnce() -> String) {
    if d > acc.0 || d.is_nan() {
        *acc = (d, what());
    }
}

fn within(d: f64, tol: f64, what: &str) -> Verdict {
    if d < tol {
        Ok(format!("{what} {d:.2e} < {tol:.0e}"))
    } else {
        Err(format!("{what} {d:.2e} >= {tol:.0e}"))
    }
}

fn identity(name: &str, check: std::result::Result<(), String>) -> Verdict {
    check
        .map(|_| format!("{name} exact"))
        .map_err(|e| format!("{name}: {e}"))
}

fn all(parts: Vec<Verdict>) -> Verdict {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for p in parts {
        match p {
            Ok(s) => ok.push(s),
            Err(s) => bad.push(s),
        }
    }
    if bad.is_empty() {
        Ok(ok.join("; "))
    } else {
        Err(bad.join("; "))
    }
}

fn generating_function_route(data: &SuiteData) -> Verdict {
    let start = Instant::now();
    let check = identities::generating_function_route(data);
    let secs = start.elapsed().as_secs_f64();
    let exact = identity(
        &format!("a_n, b_n against both routes for n<={}", data.n_max),
        check,
    );
    let timed = if secs <= IDENTITY_BUDGET_SECS {
        Ok(format!("{secs:.2}s <= {IDENTITY_BUDGET_SECS}s"))
    } else {
        Err(format!("{secs:.2}s > {IDENTITY_BUDGET_SECS}s"))
    };
    all(vec![exact, timed])
}

fn reciprocal_law(data: &SuiteData) -> Verdict {
    // Order 9 in u^{-2} reaches u^{-18}.
    identity(
        "F(u,mu)F(u,-mu) = 1 through u^-18",
        identities::reciprocal_law(data, 9),
    )
}

fn lowered_coefficients(data: &SuiteData) -> Verdict {
    all(vec![
        identity(
            "shift identities for s<=8",
            identities::lowered_is_shift(data, 8),
        ),
        identity(
            "lowered pair re-satisfies the recursion",
            identities::lowered_recursion(data),
        ),
    ])
}

fn bridges(data: &SuiteData) -> Verdict {
    let odd_top = data.d.len() - 1;
    let odd = if odd_top >= 9 {
        identity("odd d_n vanish for n<=9", identities::odd_d_vanish(data))
    } else {
        Err(format!("gamma-ratio coefficients only reach n={odd_top}"))
    };
    all(vec![
        odd,
        identity(
            "B_n'(0) bridge for n<=6",
            identities::bprime_bridge(data, 6),
        ),
        identity("a_n(0) = dtilde_n for n<=8", identities::a_at_zero(data)),
    ])
}

/// `I_ν(r e^{iθ})` straight from the ascending series, with `z^ν` taken on
/// the sheet given by `θ`.
fn i_direct(nu: Complex64, r: f64, theta: f64) -> Complex64 {
    let ln_half_z = Complex64::new((0.5 * r).ln(), theta);
    let q = (2.0 * ln_half_z).exp();
    let mut term = (nu * ln_half_z - log_gamma(nu + 1.0).expect("no pole")).exp();
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (nu + k as f64));
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

fn bessel_suite() -> Verdict {
    let prec = dd();
    let mut wr = (0.0, String::new());
    for nu in [0.0, 0.3, 1.7] {
        for x in [0.5, 2.0, 10.0] {
            let z = pt(x, 0.0);
            let i0 = bessel_i(c(nu), &z, &prec).map_err(|e| e.to_string())?;
            let i1 = bessel_i(c(nu + 1.0), &z, &prec).map_err(|e| e.to_string())?;
            let k0 = bessel_k(c(nu), &z, &prec).map_err(|e| e.to_string())?;
            let k1 = bessel_k(c(nu + 1.0), &z, &prec).map_err(|e| e.to_string())?;
            let w = k0.mul(&i1).add(&k1.mul(&i0)).to_complex().unwrap() * x;
            worst(&mut wr, (w - 1.0).norm(), || format!("nu={nu} x={x}"));
        }
    }

    // Values at winding m against the continuation formulas applied to base
    // values, and against the ascending series on the wound sheet.
    let mut cont = (0.0, String::new());
    for nu in [c(0.7), Complex64::new(0.3, 0.4)] {
        for base in [0.4, -1.1] {
            let r = 1.5;
            let zb = pt(r, base);
            let ib = bessel_i(nu, &zb, &prec).map_err(|e| e.to_string())?;
            let kb = bessel_k(nu, &zb, &prec).map_err(|e| e.to_string())?;
            for m in -2..=2i64 {
                let theta = base + PI * m as f64;
                let z = pt(r, theta);
                let i = bessel_i(nu, &z, &prec).map_err(|e| e.to_string())?;
                let k = bessel_k(nu, &z, &prec).map_err(|e| e.to_string())?;
                let tag = || format!("nu={nu} theta={theta:.2}");
                worst(&mut cont, i.rel_discrepancy(&continue_i(nu, m, &ib)), tag);
                worst(
                    &mut cont,
                    k.rel_discrepancy(&continue_k(nu, m, &kb, &ib)),
                    tag,
                );
                let ip = i_direct(nu, r, theta);
                let im = i_direct(-nu, r, theta);
                let k_series = (im - ip) * (0.5 * PI / (PI * nu).sin());
                worst(
                    &mut cont,
                    i.rel_discrepancy(&LogComplex::from_complex(ip)),
                    tag,
                );
                worst(
                    &mut cont,
                    k.rel_discrepancy(&LogComplex::from_complex(k_series)),
                    tag,
                );
            }
        }
    }

    let mut half = (0.0, String::new());
    for x in [0.5, 2.0, 10.0, 30.0] {
        let z = pt(x, 0.0);
        let i = bessel_i(c(0.5), &z, &prec).map_err(|e| e.to_string())?;
        let k = bessel_k(c(0.5), &z, &prec).map_err(|e| e.to_string())?;
        let i_exact = LogComplex::from_real((2.0 / (PI * x)).sqrt() * x.sinh());
        let k_exact = LogComplex::from_real((PI / (2.0 * x)).sqrt() * (-x).exp());
        worst(&mut half, i.rel_discrepancy(&i_exact), || {
            format!("I x={x}")
        });
        worst(&mut half, k.rel_discrepancy(&k_exact), || {
            format!("K x={x}")
        });
    }

    all(vec![
        within(wr.0, WRONSKIAN_TOL, &format!("Wronskian worst ({})", wr.1)),
        within(
            cont.0,
            CONTINUATION_TOL,
            &format!("continuation worst ({})", cont.1),
        ),
        within(
            half.0,
            HALF_ORDER_TOL,
            &format!("half-order worst ({})", half.1),
        ),
    ])
}

fn kummer_oracle() -> Verdict {
    let prec = dd();
    let mut parts = Vec::new();
    // Γ(1) = Γ(2) = 1, so the scaled quadrature value is U itself.
    for (a, b, x, exact) in [(1.0, 2.0, 3.0, 1.0 / 3.0), (2.0, 3.0, 2.0, 0.25)] {
        let u = kummer_u_scaled_with(c(a), c(b), &pt(x, 0.0), &prec, URoute::Quadrature)
            .map_err(|e| e.to_string())?;
        let d = u.rel_discrepancy(&LogComplex::from_real(exact));
        parts.push(within(d, ORACLE_TOL, &format!("U({a},{b},{x})")));
    }
    for (a, b, x) in [
        (c(3.2), c(1.5), pt(2.0, 0.0)),
        (Complex64::new(4.0, 2.5), c(0.7), pt(1.3, 0.9)),
    ] {
        let base = kummer_u_scaled(a, b, &x, &prec).map_err(|e| e.to_string())?;
        let xv = x.value();
        let up = apply_monodromy(a, b, xv, base, 1, &prec).map_err(|e| e.to_string())?;
        let back = apply_monodromy(a, b, xv, up, -1, &prec).map_err(|e| e.to_string())?;
        parts.push(within(
            back.rel_discrepancy(&base),
            ORACLE_TOL,
            &format!("round trip a={a} b={b}"),
        ));
    }
    all(parts)
}

fn config(variant: Variant, theta_z: f64, t: f64, n: usize) -> ExpansionConfig {
    ExpansionConfig {
        variant,
        b: c(REF_B),
        t,
        u_theta: 0.0,
        z: pt(1.0, theta_z),
        n,
        prec: dd(),
    }
}

fn discrepancy(cfg: &ExpansionConfig, coeffs: &ExpansionCoefficients) -> Result<f64, String> {
    eval_sides(cfg, coeffs)
        .map(|s| s.discrepancy)
        .map_err(|e| format!("{} N={} t={}: {e}", cfg.variant, cfg.n, cfg.t))
}

fn slope_check(target: f64, label: &str, disc: impl Fn(f64) -> Result<f64, String>) -> Verdict {
    let mut pts = Vec::new();
    for t in T_GRID {
        pts.push((t.ln(), disc(t)?.ln()));
    }
    let slope = fit_slope(&pts).ok_or_else(|| format!("{label}: too few points"))?;
    let rel = (slope / target - 1.0).abs();
    let msg = format!("{label} slope {slope:.3} vs {target}");
    if rel <= SLOPE_REL_TOL {
        Ok(msg)
    } else {
        Err(format!("{msg} off by {:.0}%", 100.0 * rel))
    }
}

fn expansion_accuracy(variants: &[Variant], tol: f64, coeffs: &ExpansionCoefficients) -> Verdict {
    let mut parts = Vec::new();
    for &v in variants {
        let d = discrepancy(&config(v, 0.0, REF_T, 3), coeffs)?;
        parts.push(within(d, tol, &format!("{v} at u={REF_T} N=3")));
        for n in 1..=3usize {
            let label = format!("{v} N={n}");
            parts.push(slope_check(-2.0 * n as f64, &label, |t| {
                discrepancy(&config(v, 0.0, t, n), coeffs)
            }));
        }
    }
    all(parts)
}

fn wound_u(coeffs: &ExpansionCoefficients) -> Verdict {
    let mut parts = Vec::new();
    for v in [Variant::UCapital, Variant::ULower] {
        for (label, theta) in [("pi", PI), ("2pi", 2.0 * PI), ("5pi/2", 2.5 * PI)] {
            let d: Vec<f64> = (1..=3)
                .map(|n| discrepancy(&config(v, theta, REF_T, n), coeffs))
                .collect::<Result<_, _>>()?;
            parts.push(within(d[1], WOUND_U_TOL, &format!("{v} arg z={label} N=2")));
            if !(d[0] > d[1] && d[1] > d[2]) {
                parts.push(Err(format!(
                    "{v} arg z={label} does not decay with N: {d:?}"
                )));
            }
        }
    }
    all(parts)
}

fn gamma_ratio(coeffs: &ExpansionCoefficients) -> Verdict {
    let mut parts = Vec::new();
    let mut inexact = Vec::new();
    for u in [0.5, 3.0, 10.0, 20.0, 40.0, 123.4, 1e4] {
        for n in 1..=3 {
            let s = gamma_ratio_check(c(2.0), u, n, coeffs).map_err(|e| e.to_string())?;
            if s.lhs.to_complex() != Some(c(1.0)) || s.rhs.to_complex() != Some(c(1.0)) {
                inexact.push(format!("u={u} N={n}"));
            }
        }
    }
    parts.push(if inexact.is_empty() {
        Ok("b=2 gives exactly 1 on both sides".to_string())
    } else {
        Err(format!("b=2 not exactly 1 at {}", inexact.join(", ")))
    });
    let ratio = |t: f64, n: usize| {
        gamma_ratio_check(c(REF_B), t, n, coeffs)
            .map(|s| s.discrepancy)
            .map_err(|e| e.to_string())
    };
    parts.push(within(
        ratio(REF_T, 3)?,
        RATIO_TOL,
        &format!("b={REF_B} u={REF_T} N=3"),
    ));
    // Odd d_n vanish, so only odd N see the next term at -(2N+2).
    for n in [1usize, 3] {
        let target = -(2.0 * n as f64 + 2.0);
        parts.push(slope_check(target, &format!("b={REF_B} N={n}"), |t| {
            ratio(t, n)
        }));
    }
    all(parts)
}

fn main() -> ExitCode {
    let data = match SuiteData::build(IDENTITY_DEPTH) {
        Ok(d) => d,
        Err(e) => {
            println!("acceptance: FAIL (cannot build identity data: {e})");
            return ExitCode::FAILURE;
        }
    };
    let coeffs = match ExpansionCoefficients::new(3) {
        Ok(c) => c,
        Err(e) => {
            println!("acceptance: FAIL (cannot build expansion coefficients: {e})");
            return ExitCode::FAILURE;
        }
    };
    let criteria: Vec<Criterion> = vec![
        (
            "generating-function-route",
            Box::new(|| generating_function_route(&data)),
        ),
        ("reciprocal-law", Box::new(|| reciprocal_law(&data))),
        (
            "lowered-coefficients",
            Box::new(|| lowered_coefficients(&data)),
        ),
        ("gamma-ratio-bridges", Box::new(|| bridges(&data))),
        ("bessel-kernels", Box::new(bessel_suite)),
        ("kummer-u-oracle", Box::new(kummer_oracle)),
        (
            "m-expansion",
            Box::new(|| expansion_accuracy(&[Variant::M], M_TOL, &coeffs)),
        ),
        (
            "u-expansion",
            Box::new(|| expansion_accuracy(&[Variant::UCapital, Variant::ULower], U_TOL, &coeffs)),
        ),
        ("u-expansion-wound", Box::new(|| wound_u(&coeffs))),
        ("gamma-ratio", Box::new(|| gamma_ratio(&coeffs))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
