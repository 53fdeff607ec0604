use std::f64::consts::PI;

use kummer_asym::expansion::{
    eval_sides, fit_slope, floquet_check, gamma_ratio_check, ExpansionCoefficients,
    ExpansionConfig, Variant,
};
use kummer_asym::ratpoly::{parse_param_poly, BigRational, Param, ParamPoly};
use kummer_asym::special::bessel::{continue_i, continue_k};
use kummer_asym::special::{
    bessel_i, bessel_k, kummer_m, log_gamma, sin_pi, sin_ratio, LogComplex, Precision, RiemannPoint,
};
use kummer_asym::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn complex(range: std::ops::Range<f64>) -> impl Strategy<Value = Complex64> {
    (range.clone(), range).prop_map(|(re, im)| Complex64::new(re, im))
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1e-300)
}

fn param_poly() -> impl Strategy<Value = ParamPoly> {
    (
        prop::sample::select(vec![Param::Mu, Param::B]),
        prop::collection::vec((-20i64..20, 1i64..7), 0..5),
    )
        .prop_map(|(param, terms)| {
            let coeffs = terms
                .into_iter()
                .map(|(n, d)| BigRational::new(n.into(), d.into()))
                .collect();
            ParamPoly::new(param, coeffs)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_complex_matches_native_arithmetic(x in complex(-50.0..50.0), y in complex(-50.0..50.0)) {
        prop_assume!(x.norm() > 1e-3 && y.norm() > 1e-3);
        let (lx, ly) = (LogComplex::from_complex(x), LogComplex::from_complex(y));
        prop_assert!(close(lx.mul(&ly).to_complex().unwrap(), x * y, 1e-14));
        prop_assert!(close(lx.div(&ly).to_complex().unwrap(), x / y, 1e-14));
        let sum = x + y;
        prop_assume!(sum.norm() > 1e-6 * x.norm().max(y.norm()));
        let tol = 1e-14 * x.norm().max(y.norm()) / sum.norm();
        prop_assert!(close(lx.add(&ly).to_complex().unwrap(), sum, tol));
        prop_assert!(close(lx.add(&ly).sub(&ly).to_complex().unwrap(), x, 1e-13 * sum.norm().max(y.norm()) / x.norm()));
    }

    #[test]
    fn log_complex_self_difference_is_zero(x in complex(-1e3..1e3), shift in -900.0f64..900.0) {
        prop_assume!(x.norm() > 0.0);
        let l = LogComplex::from_complex(x).mul_exp(c(shift));
        prop_assert!(l.sub(&l).is_zero());
        prop_assert_eq!(l.rel_discrepancy(&l), 0.0);
    }

    #[test]
    fn param_poly_display_parses_back(p in param_poly()) {
        let text = p.to_string();
        let back = parse_param_poly(p.param(), &text).unwrap();
        prop_assert_eq!(back, p, "{}", text);
    }

    #[test]
    fn winding_round_trips(r in 1e-3f64..1e3, theta in -20.0f64..20.0, m in -6i64..6) {
        let z = RiemannPoint::new(r, theta).unwrap();
        let back = z.rotate_half_turns(m).rotate_half_turns(-m);
        prop_assert!((back.theta - theta).abs() < 1e-12);
        let red = z.reduce_full_turns();
        prop_assert!(red.base_theta > -PI - 1e-12 && red.base_theta <= PI + 1e-12);
        prop_assert!((red.base_theta + 2.0 * PI * red.m as f64 - theta).abs() < 1e-12);
        let half = z.reduce_half_turns();
        prop_assert!((half.base_theta + PI * half.m as f64 - theta).abs() < 1e-12);
    }

    #[test]
    fn trig_is_exact_on_the_half_lattice(k in -1000i64..1000) {
        let x = 0.5 * k as f64;
        let s = sin_pi(c(x));
        let expect = match k.rem_euclid(4) {
            1 => 1.0,
            3 => -1.0,
            _ => 0.0,
        };
        prop_assert_eq!(s, c(expect));
    }

    #[test]
    fn sin_ratio_matches_quotient(nu in complex(-2.0..2.0), m in -4i64..5) {
        prop_assume!(sin_pi(nu).norm() > 1e-2);
        let direct = sin_pi(nu * m as f64) / sin_pi(nu);
        prop_assert!((sin_ratio(nu, m) - direct).norm() < 1e-12 * direct.norm().max(1.0));
    }

    #[test]
    fn log_gamma_recurrence(w in complex(0.05..40.0)) {
        let step = log_gamma(w + 1.0).unwrap() - log_gamma(w).unwrap() - w.ln();
        // Equal up to a multiple of 2πi.
        let k = (step.im / (2.0 * PI)).round();
        prop_assert!(step.re.abs() < 1e-12 * (1.0 + w.norm().ln().abs()), "{step}");
        prop_assert!((step.im - 2.0 * PI * k).abs() < 1e-11, "{step}");
    }

    #[test]
    fn kummer_transformation(a in -3.0f64..6.0, b in 0.3f64..4.0, x in complex(-3.0..3.0)) {
        // M(a, b, x) = e^x M(b - a, b, -x)
        let prec = Precision::double_double();
        let lhs = kummer_m(c(a), c(b), x, &prec).unwrap();
        let rhs = kummer_m(c(b - a), c(b), -x, &prec).unwrap().mul_exp(x);
        prop_assume!(lhs.logmag > -10.0);
        prop_assert!(lhs.rel_discrepancy(&rhs) < 1e-11, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn bessel_continuation_holds(nu in complex(0.1..2.0), r in 0.3f64..12.0, base in -1.5f64..1.5, m in -3i64..4) {
        let prec = Precision::double_double();
        let zb = RiemannPoint::new(r, base).unwrap();
        let ib = bessel_i(nu, &zb, &prec).unwrap();
        let kb = bessel_k(nu, &zb, &prec).unwrap();
        let z = zb.rotate_half_turns(m);
        let i = bessel_i(nu, &z, &prec).unwrap();
        let k = bessel_k(nu, &z, &prec).unwrap();
        prop_assert!(i.rel_discrepancy(&continue_i(nu, m, &ib)) < 1e-10);
        prop_assert!(k.rel_discrepancy(&continue_k(nu, m, &kb, &ib)) < 1e-10);
    }

    #[test]
    fn fit_recovers_power_laws(slope in -12.0f64..0.0, scale in -20.0f64..20.0) {
        let pts: Vec<(f64, f64)> = [10.0f64, 20.0, 40.0, 80.0].iter().map(|t| (t.ln(), scale + slope * t.ln())).collect();
        prop_assert!((fit_slope(&pts).unwrap() - slope).abs() < 1e-10);
    }

    #[test]
    fn gamma_ratio_is_one_at_b_two(u in 0.05f64..1e4) {
        let coeffs = ExpansionCoefficients::new(4).unwrap();
        for n in 1..=4 {
            let s = gamma_ratio_check(c(2.0), u, n, &coeffs).unwrap();
            prop_assert_eq!(s.discrepancy, 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn floquet_relation(b in 0.6f64..3.0, bi in -0.5f64..0.5, r in 0.3f64..2.0, theta in -3.0f64..3.0, t in 5.0f64..30.0) {
        let cfg = ExpansionConfig {
            variant: Variant::M,
            b: Complex64::new(b, bi),
            t,
            u_theta: 0.0,
            z: RiemannPoint::new(r, theta).unwrap(),
            n: 1,
            prec: Precision::double_double(),
        };
        // Points whose M series cancels beyond the working precision report
        // an error instead of a value; those say nothing about the relation.
        let check = floquet_check(&cfg);
        prop_assume!(!matches!(check, Err(Error::PrecisionExhausted { .. })));
        prop_assert!(check.unwrap().discrepancy < 1e-8);
    }

    #[test]
    fn discrepancy_shrinks_with_order(
        variant in prop::sample::select(vec![Variant::M, Variant::UCapital, Variant::ULower]),
        b in 1.0f64..2.5,
        r in 0.5f64..1.0,
        theta in -0.5f64..0.5,
        t in 20.0f64..40.0,
    ) {
        let coeffs = ExpansionCoefficients::new(3).unwrap();
        let d: Vec<f64> = (1..=3)
            .map(|n| {
                let cfg = ExpansionConfig {
                    variant,
                    b: c(b),
                    t,
                    u_theta: 0.0,
                    z: RiemannPoint::new(r, theta).unwrap(),
                    n,
                    prec: Precision::double_double(),
                };
                eval_sides(&cfg, &coeffs).unwrap().discrepancy
            })
            .collect();
        prop_assert!(d[0] > d[1] && d[1] > d[2], "{:?}", d);
    }
}
