use std::f64::consts::{LN_2, PI};

use dirichlet_core::bohr::{bohr_eval, map_zero_to_bohr, BohrBasis};
use dirichlet_core::geometry::{winding_number, Rect};
use dirichlet_core::lifting::{lift, LiftOptions, PlanePath};
use dirichlet_core::models::{zeta_multiplier, AnalyticTarget, DirichletPolynomial, Zeta};
use dirichlet_core::series::{
    abscissa_abs, abscissa_conv, eval_partial, from_power_series, normalize_leading, tail_bound, GeneralDirichletSeries,
};
use dirichlet_core::zeros::count_zeros;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn one_plus_two() -> DirichletPolynomial {
    DirichletPolynomial::from_terms("1 + 2^-s", &[(LN_2, c(1.0, 0.0))])
}

fn ordinary_series() -> impl Strategy<Value = GeneralDirichletSeries> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 2..60).prop_map(|v| {
        let mut coeffs: Vec<Complex64> = v.into_iter().map(|(a, b)| c(a, b)).collect();
        coeffs[0] = c(1.0, 0.0);
        coeffs[1] += c(0.5, 0.0);
        GeneralDirichletSeries::ordinary("random", coeffs).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn abscissas_are_ordered(series in ordinary_series()) {
        let n = series.len();
        let sc = abscissa_conv(&series, n).unwrap();
        let sa = abscissa_abs(&series, n).unwrap();
        prop_assert!(sc <= sa + 1e-9);
    }

    #[test]
    fn normalization_is_idempotent(series in ordinary_series()) {
        let once = normalize_leading(&series).unwrap();
        prop_assert_eq!(normalize_leading(&once).unwrap(), once);
    }

    #[test]
    fn tail_bound_majorizes(series in ordinary_series(), t in -50.0f64..50.0, ds in 0.0f64..8.0) {
        let n = series.len();
        let sigma0 = abscissa_abs(&series, n).unwrap() + 1.0;
        let sigma = sigma0 + ds;
        let bound = tail_bound(&series, sigma, sigma0, n).unwrap();
        let v = eval_partial(&series, c(sigma, t), n);
        prop_assert!((v - 1.0).norm() <= bound * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn power_series_matches_polynomial(coeffs in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..20),
                                       sigma in 0.2f64..3.0, t in -10.0f64..10.0) {
        let a: Vec<Complex64> = coeffs.into_iter().map(|(x, y)| c(x, y)).collect();
        let series = from_power_series(&a, c(0.0, 0.0)).unwrap();
        let s = c(sigma, t);
        let z = (-s).exp();
        let direct = a.iter().rev().fold(c(0.0, 0.0), |acc, x| acc * z + x);
        prop_assert!((eval_partial(&series, s, a.len()) - direct).norm() < 1e-12 * (1.0 + direct.norm()));
    }

    #[test]
    fn zeta_conjugate_symmetry(sigma in -10.0f64..10.0, t in 0.5f64..100.0) {
        let z = Zeta::default();
        let s = c(sigma, t);
        let a = z.eval(s.conj()).unwrap();
        let b = z.eval(s).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
    }

    #[test]
    fn zeta_functional_equation(sigma in -3.0f64..4.0, t in -30.0f64..30.0) {
        let s = c(sigma, t);
        prop_assume!((s - 1.0).norm() > 0.1 && s.norm() > 0.1);
        let z = Zeta::default();
        let lhs = z.eval(s).unwrap();
        let rhs = zeta_multiplier(s).unwrap() * z.eval(1.0 - s).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-8 * (1.0 + lhs.norm()));
    }

    #[test]
    fn zeta_derivative_matches_difference(sigma in -8.0f64..8.0, t in 1.0f64..80.0) {
        let z = Zeta::default();
        let s = c(sigma, t);
        let h = 1e-5;
        let fd = (z.eval(s + h).unwrap() - z.eval(s - h).unwrap()) / (2.0 * h);
        let d = z.deriv(s).unwrap();
        prop_assert!((fd - d).norm() <= 1e-7 * d.norm().max(1.0));
    }

    #[test]
    fn lifted_segments_return_to_seed(t0 in 0.5f64..8.0, wr in -3.0f64..3.0, wi in -3.0f64..3.0) {
        let f = one_plus_two();
        let seed = c(0.3, t0);
        let w0 = f.eval(seed).unwrap();
        let w1 = c(wr, wi);
        prop_assume!((w1 - w0).norm() > 1e-3);
        let opts = LiftOptions::default();
        let there = lift(&f, &PlanePath::segment(w0, w1), seed, &opts).unwrap();
        prop_assume!(matches!(there.termination, dirichlet_core::lifting::Termination::Completed));
        prop_assert!(there.max_residual() < 1e-9);
        let back = lift(&f, &PlanePath::segment(w1, w0), there.last(), &opts).unwrap();
        prop_assume!(matches!(back.termination, dirichlet_core::lifting::Termination::Completed));
        prop_assert!((back.last() - seed).norm() < 1e-7);
    }

    #[test]
    fn closed_form_zero_counts(s0 in -3.0f64..0.0, w in 0.5f64..3.0, t0 in -20.0f64..20.0, h in 0.5f64..15.0) {
        let step = PI / LN_2;
        let t1 = t0 + h;
        // keep the edges away from the zero lines
        let near = |t: f64| ((t / step - 1.0) / 2.0 - ((t / step - 1.0) / 2.0).round()).abs() < 1e-3;
        prop_assume!(!near(t0) && !near(t1) && s0.abs() > 1e-3 && (s0 + w).abs() > 1e-3);
        let expected = (-20..=20)
            .map(|k| (2 * k + 1) as f64 * step)
            .filter(|t| *t > t0 && *t < t1 && s0 < 0.0 && s0 + w > 0.0)
            .count() as i64;
        let rect = Rect::new(s0, s0 + w, t0, t1).unwrap();
        prop_assert_eq!(count_zeros(&one_plus_two(), &rect, false).unwrap(), expected);
    }

    #[test]
    fn bohr_lift_matches_series(sigma in -1.0f64..3.0, t in -30.0f64..30.0) {
        let series = GeneralDirichletSeries::zeta(200);
        let b = BohrBasis::for_series(&series).unwrap();
        let s = c(sigma, t);
        let lhs = bohr_eval(&series, &b, &map_zero_to_bohr(s, &b), 200).unwrap();
        let rhs = eval_partial(&series, s, 200);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn rectangle_winding(x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let poly = [c(-5.5, -5.5), c(5.5, -5.5), c(5.5, 5.5), c(-5.5, 5.5)];
        prop_assert_eq!(winding_number(&poly, c(x, y)).abs(), 1);
        prop_assert_eq!(winding_number(&poly, c(x + 20.0, y)), 0);
    }
}
