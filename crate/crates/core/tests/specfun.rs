use herglotz::specfun::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use std::f64::consts::PI;

fn j(nu: f64, r: f64) -> f64 {
    bessel_j(BesselOrder::new(nu).unwrap(), r, SeriesBudget::default()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

#[test]
fn order_constructor() {
    assert!(BesselOrder::new(2.5).is_ok());
    assert!(BesselOrder::new(-3.0).is_ok());
    assert!(BesselOrder::new(0.3).is_err());
    assert!(BesselOrder::new(-0.5).is_err());
    assert_eq!(BesselOrder::for_degree(2, 3).value(), 2.5);
}

#[test]
fn bessel_trivial_values() {
    assert_eq!(j(0.0, 0.0), 1.0);
    assert_eq!(j(1.0, 0.0), 0.0);
    assert!(j(0.5, PI).abs() < 1e-15);
}

#[test]
fn half_integer_closed_forms() {
    for i in 1..60 {
        let r = i as f64 * 0.25;
        let c = (2.0 / (PI * r)).sqrt();
        let j12 = c * r.sin();
        let j32 = c * (r.sin() / r - r.cos());
        assert!(close(j(0.5, r), j12, 1e-13), "r={r}");
        assert!(close(j(1.5, r), j32, 1e-12), "r={r}");
    }
}

#[test]
fn tabulated_integer_orders() {
    // Abramowitz & Stegun, Table 9.1
    assert!(close(j(0.0, 1.0), 0.765_197_686_557_966_6, 1e-15));
    assert!(close(j(1.0, 1.0), 0.440_050_585_744_933_5, 1e-15));
    assert!(close(j(0.0, 10.0), -0.245_935_764_451_348_3, 1e-14));
    assert!(close(j(2.0, 5.0), 0.046_565_116_277_752_2, 1e-14));
}

#[test]
fn three_term_recurrence() {
    // J_{ν−1} + J_{ν+1} = (2ν/r) J_ν
    for twice in 2..30 {
        let nu = twice as f64 / 2.0;
        for &r in &[0.3, 1.0, 4.0, 9.5] {
            let lhs = j(nu - 1.0, r) + j(nu + 1.0, r);
            let rhs = 2.0 * nu / r * j(nu, r);
            assert!((lhs - rhs).abs() < 1e-13 * (1.0 + rhs.abs()), "nu={nu} r={r}");
        }
    }
}

#[test]
fn reflection_is_exact() {
    for n in 0..9i64 {
        for &r in &[0.1, 2.0, 7.3] {
            let pos = bessel_j(BesselOrder::integer(n), r, SeriesBudget::default()).unwrap();
            let neg = bessel_j(BesselOrder::integer(-n), r, SeriesBudget::default()).unwrap();
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(neg, s * pos);
        }
    }
}

#[test]
fn budget_exhaustion_is_reported() {
    let b = SeriesBudget::new(1e-14, 3).unwrap();
    match bessel_j(BesselOrder::integer(0), 8.0, b) {
        Err(herglotz::Error::Convergence { terms, .. }) => assert_eq!(terms, 3),
        other => panic!("expected convergence failure, got {other:?}"),
    }
    assert!(SeriesBudget::new(0.0, 10).is_err());
    assert!(SeriesBudget::new(1e-3, 0).is_err());
}

#[test]
fn negative_radius_rejected() {
    assert!(bessel_j(BesselOrder::integer(0), -1.0, SeriesBudget::default()).is_err());
}

#[test]
fn radial_factor_limits() {
    let b = SeriesBudget::default();
    // d = 3, m = 0 at r = 0: 1/(√2 Γ(3/2))
    let want = 1.0 / (2f64.sqrt() * gamma(1.5));
    assert!((radial_factor(0, 3, 0.0, b).unwrap() - want).abs() < 1e-15);
    assert_eq!(radial_factor(2, 3, 0.0, b).unwrap(), 0.0);
    for &r in &[0.2f64, 1.0, 5.0] {
        let direct = r.powf(-0.5) * j(2.5, r);
        assert!(close(radial_factor(2, 3, r, b).unwrap(), direct, 1e-14));
        assert!(close(radial_factor(3, 2, r, b).unwrap(), j(3.0, r), 1e-15));
    }
}

#[test]
fn bound_examples() {
    assert_eq!(bessel_bound(BesselOrder::integer(0), 5.0), 1.0);
    assert_eq!(bessel_bound(BesselOrder::integer(1), 0.0), 0.0);
    let want = 2.0 / (PI.sqrt() * 1.329_340_388_179_137);
    assert!((bessel_bound(BesselOrder::integer(2), 2.0) - want).abs() < 1e-12);
    assert!((want - 0.8488).abs() < 1e-4);
}

#[test]
fn bound_holds_on_lattice() {
    for twice in 0..24 {
        let nu = BesselOrder::new(twice as f64 / 2.0).unwrap();
        for i in 0..80 {
            let r = i as f64 * 0.25;
            let v = bessel_j(nu, r, SeriesBudget::default()).unwrap();
            assert!(v.abs() <= bessel_bound(nu, r) * (1.0 + 1e-12) + 1e-15, "nu={} r={r}", nu.value());
        }
    }
}

#[test]
fn product_series_examples() {
    let b = SeriesBudget::default();
    assert_eq!(bessel_product_series(0, 0, 0.0, 0.0, b).unwrap(), 1.0);
    assert_eq!(bessel_product_series(1, 2, 0.0, 0.0, b).unwrap(), 0.0);
    let want = j(1.5, 1.3).powi(2);
    assert!(close(bessel_product_series(1, 1, 0.5, 1.3, b).unwrap(), want, 1e-14));
    assert!(bessel_product_series(1, 1, 0.3, 1.0, b).is_err());
}

#[test]
fn product_integral_examples() {
    assert!((bessel_product_integral(0, 0, 0.0, 0.0, 512).unwrap() - 1.0).abs() < 1e-14);
    let want = j(2.0, 1.0) * j(0.0, 1.0);
    assert!((bessel_product_integral(2, 0, 0.0, 1.0, 512).unwrap() - want).abs() < 1e-13);
    let want = j(1.5, 0.7).powi(2);
    assert!((bessel_product_integral(1, 1, 0.5, 0.7, 512).unwrap() - want).abs() < 1e-13);
    let (v, est) = bessel_product_integral_with_estimate(3, 1, 1.0, 4.0, 512).unwrap();
    assert!((v - j(4.0, 4.0) * j(2.0, 4.0)).abs() < 1e-12 && est < 1e-10);
}

#[test]
fn product_identities_on_a_coarse_grid() {
    // The full 50-radius sweep lives in the acceptance suite.
    let b = SeriesBudget { rel_tol: 1e-14, max_terms: 1024 };
    for &alpha in &[0.0, 0.5, 1.0] {
        for n in (0..=8).step_by(3) {
            for m in (0..=8).step_by(2) {
                for &r in &[0.5, 3.3, 7.1, 10.0] {
                    let series = bessel_product_series(n, m, alpha, r, b).unwrap();
                    let direct = j(n as f64 + alpha, r) * j(m as f64 + alpha, r);
                    assert!((series - direct).abs() <= 1e-10 * (1.0 + direct.abs()));
                    let integral = bessel_product_integral(n, m, alpha, r, 512).unwrap();
                    assert!((integral - direct).abs() <= 1e-8 * (1.0 + direct.abs()));
                }
            }
        }
    }
}

#[test]
fn product_small_r_order() {
    let b = SeriesBudget::default();
    for &alpha in &[0.0, 0.5, 1.0] {
        for (n, m) in [(0, 0), (1, 3), (4, 2), (6, 6)] {
            let ratio = |r: f64| {
                bessel_product_series(n, m, alpha, r, b).unwrap() / r.powf(n as f64 + m as f64 + 2.0 * alpha)
            };
            let (a, bb, c) = (ratio(1e-3), ratio(1e-4), ratio(1e-5));
            assert!(c != 0.0 && c.is_finite());
            assert!(((a - c) / c).abs() < 1e-5 && ((bb - c) / c).abs() < 1e-7);
            let lead = bessel_product_coefficients(n, m, alpha, 1).unwrap()[0];
            let want = lead / 2f64.powf(n as f64 + m as f64 + 2.0 * alpha);
            assert!(((c - want) / want).abs() < 1e-9);
        }
    }
}

#[test]
fn product_coefficients_resum() {
    let c = bessel_product_coefficients(2, 1, 0.5, 40).unwrap();
    let r: f64 = 1.7;
    let h: f64 = r / 2.0;
    let sum: f64 = c.iter().enumerate().map(|(k, ck)| ck * h.powi(4 + 2 * k as i32)).sum();
    assert!(close(sum, j(2.5, r) * j(1.5, r), 1e-14));
}

fn gegenbauer_recurrence(m: usize, lambda: f64, z: f64) -> f64 {
    let (mut c0, mut c1) = (1.0, 2.0 * lambda * z);
    if m == 0 {
        return c0;
    }
    for n in 2..=m {
        let nf = n as f64;
        let c2 = (2.0 * z * (nf + lambda - 1.0) * c1 - (nf + 2.0 * lambda - 2.0) * c0) / nf;
        c0 = c1;
        c1 = c2;
    }
    c1
}

#[test]
fn gegenbauer_examples() {
    assert_eq!(gegenbauer(0, 0.7, 0.3), 1.0);
    assert!((gegenbauer(1, 1.5, 0.4) - 2.0 * 1.5 * 0.4).abs() < 1e-15);
    assert!(gegenbauer(2, 1.0, 0.5).abs() < 1e-15);
}

#[test]
fn gegenbauer_exact_mode() {
    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    // C_2^1(z) = 4z² − 1
    assert_eq!(gegenbauer_exact(2, &q(1, 1), &q(1, 3)), q(4, 9) - q(1, 1));
    // Legendre P_3(1/2) = −7/16
    assert_eq!(gegenbauer_exact(3, &q(1, 2), &q(1, 2)), q(-7, 16));
}

proptest! {
    #[test]
    fn gegenbauer_matches_recurrence(m in 0usize..14, lambda in 0.1f64..4.0, z in -1.0f64..1.0) {
        let a = gegenbauer(m, lambda, z);
        let b = gegenbauer_recurrence(m, lambda, z);
        prop_assert!((a - b).abs() <= 1e-11 * (1.0 + b.abs()));
    }

    #[test]
    fn product_series_matches_direct_product(n in 0usize..9, m in 0usize..9, a in 0usize..3, r in 0.0f64..10.0) {
        let alpha = a as f64 / 2.0;
        let b = SeriesBudget { rel_tol: 1e-14, max_terms: 1024 };
        let s = bessel_product_series(n, m, alpha, r, b).unwrap();
        let d = j(n as f64 + alpha, r) * j(m as f64 + alpha, r);
        prop_assert!((s - d).abs() <= 1e-10 * (1.0 + d.abs()));
    }

    #[test]
    fn reflection_structure(n in 0i64..12, r in 0.0f64..12.0) {
        let p = bessel_j(BesselOrder::integer(n), r, SeriesBudget::generous()).unwrap();
        let q = bessel_j(BesselOrder::integer(-n), r, SeriesBudget::generous()).unwrap();
        prop_assert_eq!(q, if n % 2 == 0 { p } else { -p });
    }
}
