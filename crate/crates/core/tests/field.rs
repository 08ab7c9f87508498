use std::f64::consts::PI;
use std::sync::Arc;

use herglotz::field::io::{parse_field, parse_grid, parse_magnitude_data, write_field, write_grid, write_magnitude_data};
use herglotz::field::{
    chebyshev_radii, compare_magnitudes, equal_magnitude, magnitude_coeffs, sample_magnitude_grid,
    trivially_equivalent, FieldGenerator, HerglotzField, Verdict,
};
use herglotz::harmonics::{point_from_angles, Basis, BasisSpec, Normalization, SphereGrid};
use herglotz::specfun::{bessel_j, BesselOrder, SeriesBudget};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn j(nu: i64, r: f64) -> f64 {
    bessel_j(BesselOrder::integer(nu), r, SeriesBudget::generous()).unwrap()
}

fn dir2(phi: f64) -> Vec<f64> {
    vec![phi.cos(), phi.sin()]
}

fn random2d(m: usize, seed: u64) -> HerglotzField {
    FieldGenerator::new(m).generate_seeded(HerglotzField::fourier_basis(m), seed).unwrap()
}

fn palpha3(m: usize) -> Arc<Basis> {
    Arc::new(Basis::new(BasisSpec::palpha(3, Normalization::Orthonormal).unwrap(), m).unwrap())
}

#[test]
fn eval_examples() {
    let zero = HerglotzField::zeros(HerglotzField::fourier_basis(3), 3).unwrap();
    assert_eq!(zero.eval(0.7, &dir2(1.0)), c(0.0, 0.0));

    let u = HerglotzField::from_fourier(0, |_| c(1.0, 0.0));
    for phi in [0.0, 1.0, 2.5] {
        let want = (2.0 * PI).sqrt() * j(0, 1.3);
        assert!((u.eval(1.3, &dir2(phi)).re - want).abs() < 1e-14);
    }

    let basis = palpha3(2);
    let mut coeffs: Vec<Vec<Complex64>> = (0..=2).map(|m| vec![c(0.0, 0.0); basis.count(m)]).collect();
    coeffs[0][0] = c(1.0, 0.0);
    let u = HerglotzField::new(basis, coeffs).unwrap();
    // r^{-1/2} J_{1/2}(r) → 1/(√2 Γ(3/2)) as r → 0
    let want = (2.0 * PI).sqrt() / (2f64.sqrt() * (PI.sqrt() / 2.0));
    assert!((u.eval(0.0, &[0.0, 0.0, 1.0]).re - want).abs() < 1e-13);
}

#[test]
fn eval_is_continuous_at_origin() {
    for (dim, seed) in [(2usize, 3u64), (3, 4)] {
        let basis =
            if dim == 2 { HerglotzField::fourier_basis(4) } else { palpha3(4) };
        let u = FieldGenerator::new(4).generate_seeded(basis, seed).unwrap();
        let x = point_from_angles(if dim == 2 { &[0.4][..] } else { &[0.4, 1.1][..] });
        let at0 = u.eval(0.0, &x);
        let mut prev = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-6] {
            let d = (u.eval(eps, &x) - at0).norm();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-5, "degree-one terms vanish like ε");
    }
}

#[test]
fn magnitude_examples() {
    let u = HerglotzField::from_fourier(1, |k| if k == 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
    for r in [0.2, 0.9, 3.0] {
        let want = 2.0 * PI * j(1, r).powi(2);
        assert!((u.magnitude_sq(r, &dir2(0.3)) - want).abs() < 1e-13);
    }
    let v = u.scaled(c(0.0, 1.0));
    assert_eq!(u.magnitude_sq(0.8, &dir2(2.0)), v.magnitude_sq(0.8, &dir2(2.0)));

    let data = magnitude_coeffs(&u, None);
    let p = data.spectrum(1, 1).unwrap();
    for phi in [0.0, 1.0, 4.0] {
        assert!((p.eval(phi) - 1.0).abs() < 1e-15);
    }
}

#[test]
fn both_magnitude_paths_agree() {
    for seed in 0..20 {
        let u = random2d(1 + (seed as usize % 8), seed);
        for r in [0.1, 0.5, 1.0] {
            for phi in [0.0, 0.7, 2.9] {
                let a = u.magnitude_sq(r, &dir2(phi));
                let b = u.magnitude_sq_via_pairs(r, &dir2(phi));
                assert!((a - b).abs() <= 1e-10 * a.max(1e-300), "{a} {b}");
            }
        }
    }
}

#[test]
fn synthesis_identity_from_spectra() {
    for seed in 0..20 {
        let m = 1 + seed as usize % 8;
        let u = random2d(m, 100 + seed);
        let data = magnitude_coeffs(&u, None);
        for r in [0.2, 0.6, 1.0] {
            for phi in [0.1, 1.9, 4.4] {
                let mut acc = 0.0;
                for p in data.spectra.as_ref().unwrap() {
                    let w = if p.m == p.n { 1.0 } else { 2.0 };
                    acc += w * p.eval(phi) * j(p.m as i64, r) * j(p.n as i64, r);
                }
                let direct = u.magnitude_sq(r, &dir2(phi));
                assert!((2.0 * PI * acc - direct).abs() <= 1e-9 * (1.0 + direct));
            }
        }
    }
}

#[test]
fn diagonal_pairs_are_nonnegative() {
    let u = FieldGenerator::new(3).generate_seeded(palpha3(3), 9).unwrap();
    let data = magnitude_coeffs(&u, None);
    for m in 0..=3 {
        assert!(data.sample(m, m).unwrap().iter().all(|&v| v >= -1e-12));
    }
    let zero = HerglotzField::zeros(palpha3(2), 2).unwrap();
    assert_eq!(magnitude_coeffs(&zero, None).scale(), 0.0);
}

#[test]
fn equal_magnitude_examples_and_route_agreement() {
    for seed in 0..100u64 {
        let u = random2d(1 + seed as usize % 6, seed);
        let phase = Complex64::from_polar(1.0, seed as f64);
        for v in [u.scaled(phase), u.conjugate()] {
            let cmp = compare_magnitudes(&u, &v, 1e-9).unwrap();
            assert!(cmp.coefficient_equal && cmp.agree());
            assert!(equal_magnitude(&u, &v, 1e-9));
            for m in 0..=u.max_degree() {
                assert!((u.degree_power(m) - v.degree_power(m)).abs() <= 1e-9);
            }
        }
        let mut w = u.clone();
        w.coeffs_mut()[1][0] += c(1e-3, 0.0);
        let cmp = compare_magnitudes(&u, &w, 1e-9).unwrap();
        assert!(!cmp.coefficient_equal && cmp.agree());
    }
    for seed in 0..10u64 {
        let u = FieldGenerator::new(3).generate_seeded(palpha3(3), seed).unwrap();
        let cmp = compare_magnitudes(&u, &u.conjugate(), 1e-9).unwrap();
        assert!(cmp.coefficient_equal && cmp.agree());
    }
}

#[test]
fn trivial_equivalence_examples() {
    let u = random2d(4, 7);
    let t = trivially_equivalent(&u, &u.scaled(c(0.0, 1.0)), 1e-9).unwrap();
    assert_eq!(t.verdict, Verdict::Identity);
    assert!((t.c.unwrap() - c(0.0, 1.0)).norm() < 1e-12);

    let t = trivially_equivalent(&u, &u.conjugate(), 1e-9).unwrap();
    assert_eq!(t.verdict, Verdict::Conjugate);
    assert!((t.c.unwrap() - c(1.0, 0.0)).norm() < 1e-12);

    for seed in 0..20 {
        let t = trivially_equivalent(&random2d(3, seed), &random2d(3, 1000 + seed), 1e-9).unwrap();
        assert_eq!(t.verdict, Verdict::Inequivalent);
    }

    let zero = HerglotzField::zeros(HerglotzField::fourier_basis(2), 2).unwrap();
    let t = trivially_equivalent(&zero, &zero, 1e-9).unwrap();
    assert_eq!((t.verdict, t.c), (Verdict::Both, Some(c(1.0, 0.0))));

    let real = FieldGenerator { real: true, ..FieldGenerator::new(3) }.generate_seeded(palpha3(3), 2).unwrap();
    assert_eq!(trivially_equivalent(&real, &real.scaled(c(-1.0, 0.0)), 1e-9).unwrap().verdict, Verdict::Both);
}

#[test]
fn degree_power_examples() {
    let u = HerglotzField::from_fourier(2, |k| if k == 1 { c(0.0, 3.0) } else { c(0.0, 0.0) });
    assert!((u.degree_power(1) - 9.0).abs() < 1e-15);
    assert_eq!(u.degree_power(0), 0.0);
    assert_eq!(u.degree_power(2), 0.0);

    // raw p_α coordinates go through the Gram matrix
    let raw = Arc::new(Basis::new(BasisSpec::palpha(3, Normalization::Raw).unwrap(), 2).unwrap());
    let u = FieldGenerator::new(2).generate_seeded(raw, 5).unwrap();
    let grid = SphereGrid::for_degree(3, 4).unwrap();
    let vals: Vec<f64> = grid.nodes().iter().map(|x| u.angular_parts(x)[2].norm_sqr()).collect();
    let direct = grid.mean(&vals);
    assert!((u.degree_power(2) - direct).abs() < 1e-12 * direct.max(1.0));
}

#[test]
fn mean_coefficient_recovers_a01() {
    let u = HerglotzField::from_fourier(3, |k| if k == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) });
    assert!((u.mean_coefficient(1.0).unwrap() - c(1.0, 0.0)).norm() < 1e-9);

    for seed in 0..5 {
        let u = random2d(4, seed);
        let w = FieldGenerator { zero_mean: true, ..FieldGenerator::new(4) }
            .generate_seeded(HerglotzField::fourier_basis(4), 50 + seed)
            .unwrap();
        assert!(w.mean_coefficient(1.0).unwrap().norm() < 1e-9);
        let sum = u.add(&w).unwrap().mean_coefficient(1.0).unwrap();
        assert!((sum - u.fourier_coeff(0)).norm() < 1e-9);
    }
    let v = FieldGenerator::new(3).generate_seeded(palpha3(3), 8).unwrap();
    assert!((v.mean_coefficient(0.8).unwrap() - v.coeffs()[0][0]).norm() < 1e-9);
    // J_0 vanishes near 2.404825557695773
    assert!(random2d(2, 1).mean_coefficient(2.404825557695773).is_err());
}

#[test]
fn field_file_rejects_bad_input() {
    let text = "format = herglotz-field/1\ndim = 2\nmax_degree = 1\nbasis = fourier2d\ncoeff 1 3 1.0 0.0\n";
    match parse_field(text) {
        Err(herglotz::Error::Parse { line, .. }) => assert_eq!(line, 5),
        other => panic!("{other:?}"),
    }
    assert!(parse_field("format = herglotz-field/1\ndim = 2\nmax_degree = x\nbasis = fourier2d\n").is_err());
}

#[test]
fn zonal_field_round_trips() {
    let spec = BasisSpec::zonal_seeded(3, 3, 11, Normalization::Raw).unwrap();
    let basis = Arc::new(Basis::new(spec, 3).unwrap());
    let u = FieldGenerator::new(3).generate_seeded(basis, 1).unwrap();
    let text = write_field(&u);
    let v = parse_field(&text).unwrap();
    assert_eq!(v.spec(), u.spec());
    assert_eq!(v.coeffs(), u.coeffs());
    assert_eq!(write_field(&v), text);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fourier_field_round_trips(m in 0usize..6, seed in any::<u64>()) {
        let u = random2d(m, seed);
        let v = parse_field(&write_field(&u)).unwrap();
        prop_assert_eq!(v.coeffs(), u.coeffs());
    }

    #[test]
    fn magnitude_data_round_trips(m in 0usize..5, seed in any::<u64>()) {
        let u = random2d(m, seed);
        let data = magnitude_coeffs(&u, None);
        let back = parse_magnitude_data(&write_magnitude_data(&data)).unwrap();
        prop_assert_eq!(back.deviation(&data).unwrap(), 0.0);
    }

    #[test]
    fn grid_round_trips(seed in any::<u64>()) {
        let u = random2d(2, seed);
        let g = sample_magnitude_grid(&u, &chebyshev_radii(3, 1.0), &SphereGrid::new(2, 8).unwrap());
        let back = parse_grid(&write_grid(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn unimodular_scaling_preserves_data(seed in any::<u64>(), t in 0.0..6.3f64) {
        let u = random2d(3, seed);
        let a = magnitude_coeffs(&u, None);
        let b = magnitude_coeffs(&u.scaled(Complex64::from_polar(1.0, t)), None);
        prop_assert!(a.deviation(&b).unwrap() <= 1e-12 * (1.0 + a.scale()));
    }
}

#[test]
fn sampled_data_round_trips() {
    let u = FieldGenerator::new(2).generate_seeded(palpha3(2), 3).unwrap();
    let data = magnitude_coeffs(&u, None);
    let back = parse_magnitude_data(&write_magnitude_data(&data)).unwrap();
    assert_eq!(back.deviation(&data).unwrap(), 0.0);

    let g = sample_magnitude_grid(&u, &chebyshev_radii(2, 1.0), &SphereGrid::new(3, 3).unwrap());
    assert_eq!(parse_grid(&write_grid(&g)).unwrap(), g);
    assert!(write_grid(&g).starts_with("r,theta,phi,value\n"));
}
