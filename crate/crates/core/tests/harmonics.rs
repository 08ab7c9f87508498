use herglotz::harmonics::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::f64::consts::PI;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn harmonic_dim_known_values() {
    for m in 0..10 {
        assert_eq!(harmonic_dim(3, m), 2 * m + 1);
        assert_eq!(harmonic_dim(2, m), if m == 0 { 1 } else { 2 });
    }
    for d in 2..7 {
        assert_eq!(harmonic_dim(d, 0), 1);
        assert_eq!(harmonic_dim(d, 1), d);
    }
}

/// Brute force: dimension of the kernel of Δ on homogeneous degree-m
/// polynomials, by exact Gaussian elimination over monomial coordinates.
fn kernel_dim_of_laplacian(d: usize, m: usize) -> usize {
    let mut monos = Vec::new();
    fn rec(d: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == d - 1 {
            let mut v = cur.clone();
            v.push(left);
            out.push(v);
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(d, left - e, cur, out);
            cur.pop();
        }
    }
    rec(d, m as u32, &mut vec![], &mut monos);
    let images: Vec<Polynomial> =
        monos.iter().map(|a| Polynomial::monomial(MultiIndex(a.clone()), q(1)).laplacian()).collect();
    // rows = coefficient of each target monomial
    let mut targets: Vec<MultiIndex> = images.iter().flat_map(|p| p.terms().map(|(a, _)| a.clone())).collect();
    targets.sort();
    targets.dedup();
    let mut mat: Vec<Vec<BigRational>> =
        targets.iter().map(|t| images.iter().map(|p| p.coefficient(t)).collect()).collect();
    let cols = monos.len();
    let mut rank = 0;
    for c in 0..cols {
        if let Some(p) = (rank..mat.len()).find(|&r| !mat[r][c].is_zero()) {
            mat.swap(rank, p);
            for r in 0..mat.len() {
                if r != rank && !mat[r][c].is_zero() {
                    let f = &mat[r][c] / &mat[rank][c];
                    for k in 0..cols {
                        let v = &f * &mat[rank][k];
                        mat[r][k] -= v;
                    }
                }
            }
            rank += 1;
        }
    }
    cols - rank
}

#[test]
fn harmonic_dim_matches_brute_force() {
    for d in 2..=4 {
        for m in 0..=5 {
            assert_eq!(harmonic_dim(d, m), kernel_dim_of_laplacian(d, m), "d={d} m={m}");
        }
    }
}

#[test]
fn palpha_examples() {
    let x1 = Polynomial::variable(3, 0);
    assert_eq!(p_alpha(&MultiIndex(vec![1, 0, 0]), 3).unwrap(), x1);
    assert_eq!(p_alpha(&MultiIndex(vec![0, 0, 0]), 3).unwrap(), Polynomial::one(3));
    let x1x2 = &x1 * &Polynomial::variable(3, 1);
    assert_eq!(p_alpha(&MultiIndex(vec![1, 1, 0]), 3).unwrap(), x1x2);
    assert!(p_alpha(&MultiIndex(vec![1, 0]), 2).is_err());
}

#[test]
fn palpha_second_degree_closed_form() {
    // ∂_1² |x|^{-1} gives p_{(2,0,0)} = x_1² − |x|²/3
    let p = p_alpha(&MultiIndex(vec![2, 0, 0]), 3).unwrap();
    let x1 = Polynomial::variable(3, 0);
    let want = &(&x1 * &x1) - &Polynomial::norm_squared(3).scale(&BigRational::new(1.into(), 3.into()));
    assert_eq!(p, want);
}

#[test]
fn palpha_index_sets() {
    for d in 3..=5 {
        for m in 0..=6 {
            let idx = palpha_indices(d, m);
            assert_eq!(idx.len(), harmonic_dim(d, m));
            assert!(idx.iter().all(|a| a.degree() as usize == m && a.as_slice()[d - 1] <= 1));
        }
    }
}

#[test]
fn laplacian_examples() {
    let x1 = Polynomial::variable(3, 0);
    assert_eq!(laplacian(&(&x1 * &x1)), Polynomial::constant(3, q(2)));
    assert!(laplacian(&Polynomial::constant(3, q(7))).is_zero());
}

#[test]
fn palpha_harmonic_homogeneous_and_structured_small() {
    // The full |α| ≤ 6 sweep is in the acceptance suite.
    for d in 3..=4 {
        for m in 0..=4 {
            for a in palpha_indices(d, m) {
                let p = p_alpha(&a, d).unwrap();
                assert!(laplacian(&p).is_zero());
                assert!(p.is_homogeneous(m as u32));
                let diff = &p - &Polynomial::monomial(a.clone(), q(1));
                let (_, r) = diff.div_rem_norm_squared();
                assert!(r.is_zero(), "p_α − x^α not divisible for {a:?}");
                if m <= 1 {
                    assert!(diff.is_zero());
                }
            }
        }
    }
}

#[test]
fn division_detects_non_multiples() {
    let x1 = Polynomial::variable(3, 0);
    let (qq, r) = (&x1 * &x1).div_rem_norm_squared();
    assert_eq!(qq, Polynomial::one(3));
    assert!(!r.is_zero());
}

#[test]
fn zonal_eval_examples() {
    let z = [0.0, 0.0, 1.0];
    let t = [0.6, 0.0, 0.8];
    assert_eq!(zonal_eval(0, 3, &z, &t).unwrap(), 1.0);
    let z4 = [0.0, 0.0, 0.0, 1.0];
    assert!((zonal_eval(1, 4, &z4, &z4).unwrap() - 2.0).abs() < 1e-15);
    assert!((zonal_eval(2, 3, &z, &[1.0, 0.0, 0.0]).unwrap() + 0.5).abs() < 1e-15);
    assert!(zonal_eval(1, 3, &[0.0, 0.0, 2.0], &t).is_err());
}

#[test]
fn grid_examples() {
    let g = sphere_grid(2, 8).unwrap();
    assert_eq!(g.len(), 8);
    assert!(g.weights().iter().all(|&w| (w - 2.0 * PI / 8.0).abs() < 1e-15));
    for n in 1..12 {
        let g = sphere_grid(3, n).unwrap();
        assert!((g.weights().iter().sum::<f64>() - 4.0 * PI).abs() < 1e-12);
        assert!(g.weights().iter().all(|&w| w > 0.0));
    }
    for d in 4..=5 {
        let g = sphere_grid(d, 6).unwrap();
        assert!((g.weights().iter().sum::<f64>() - sphere_area(d)).abs() < 1e-12, "d={d}");
    }
    assert!(sphere_grid(1, 4).is_err());
    let g = sphere_grid(3, 5).unwrap();
    let y1: Vec<f64> = g.nodes().iter().map(|x| x[2]).collect();
    assert!(g.integrate(&y1).abs() < 1e-12);
}

#[test]
fn grid_exactness_against_moments() {
    // ∫_{S²} x_3^{2k} dσ = 4π/(2k+1)
    let g = sphere_grid(3, 6).unwrap();
    for k in 0..6 {
        let v: Vec<f64> = g.nodes().iter().map(|x| x[2].powi(2 * k)).collect();
        assert!((g.integrate(&v) - 4.0 * PI / (2 * k + 1) as f64).abs() < 1e-12);
    }
    // ∫_{S³} x_1² dσ = σ_4 / 4
    let g = sphere_grid(4, 4).unwrap();
    let v: Vec<f64> = g.nodes().iter().map(|x| x[0] * x[0]).collect();
    assert!((g.integrate(&v) - sphere_area(4) / 4.0).abs() < 1e-12);
}

fn bases_for(d: usize, top: usize) -> Vec<Basis> {
    let mut out = vec![];
    for norm in [Normalization::Raw, Normalization::Orthonormal] {
        out.push(Basis::new(BasisSpec::palpha(d, norm).unwrap(), top).unwrap());
        out.push(Basis::new(BasisSpec::zonal_seeded(d, top, 7, norm).unwrap(), top).unwrap());
    }
    out
}

#[test]
fn orthogonality_across_degrees() {
    for d in 3..=4 {
        let top = 4;
        let grid = SphereGrid::for_degree(d, 2 * top).unwrap();
        for b in bases_for(d, top) {
            let vals: Vec<Vec<Vec<f64>>> =
                (0..=top).map(|m| grid.nodes().iter().map(|x| b.eval_real(m, x).unwrap()).collect()).collect();
            for m in 0..=top {
                for n in 0..m {
                    for j in 0..b.count(m) {
                        for k in 0..b.count(n) {
                            let f: Vec<f64> = (0..grid.len()).map(|i| vals[m][i][j] * vals[n][i][k]).collect();
                            assert!(grid.mean(&f).abs() <= 1e-10, "d={d} m={m} n={n}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn orthonormalized_bases_are_orthonormal() {
    let grid = SphereGrid::for_degree(3, 8).unwrap();
    for b in bases_for(3, 4).into_iter().filter(|b| b.spec().normalization == Normalization::Orthonormal) {
        for m in 0..=4 {
            let n = b.count(m);
            let vals: Vec<Vec<f64>> = grid.nodes().iter().map(|x| b.eval_real(m, x).unwrap()).collect();
            for j in 0..n {
                for k in 0..n {
                    let f: Vec<f64> = vals.iter().map(|v| v[j] * v[k]).collect();
                    let want = if j == k { 1.0 } else { 0.0 };
                    assert!((grid.mean(&f) - want).abs() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn basis_eval_examples() {
    let th = [0.6f64.cos(), 0.6f64.sin()];
    assert_eq!(basis_eval(&BasisSpec::fourier2d(), 0, 1, &th).unwrap().re, 1.0);
    let v = basis_eval(&BasisSpec::fourier2d(), 3, 2, &th).unwrap();
    assert!((v.re - 1.8f64.cos()).abs() < 1e-15 && (v.im + 1.8f64.sin()).abs() < 1e-15);
    assert!(matches!(
        basis_eval(&BasisSpec::fourier2d(), 1, 3, &th),
        Err(herglotz::Error::IndexOutOfRange { .. })
    ));
    let spec = BasisSpec::zonal_seeded(3, 3, 1, Normalization::Raw).unwrap();
    let t = [0.48, 0.6, 0.64];
    for j in 1..=7 {
        let want = zonal_eval(3, 3, &spec.poles[3][j - 1], &t).unwrap();
        assert!((basis_eval(&spec, 3, j, &t).unwrap().re - want).abs() < 1e-15);
    }
    let spec = BasisSpec::palpha(3, Normalization::Raw).unwrap();
    let alphas = palpha_indices(3, 2);
    for (j, a) in alphas.iter().enumerate() {
        let want = p_alpha(a, 3).unwrap().eval(&t);
        assert!((basis_eval(&spec, 2, j + 1, &t).unwrap().re - want).abs() < 1e-15);
    }
}

#[test]
fn basis_spec_validation() {
    assert!(BasisSpec::palpha(2, Normalization::Raw).is_err());
    let mut spec = BasisSpec::zonal_seeded(3, 2, 3, Normalization::Raw).unwrap();
    assert_eq!(spec.poles[2][0], vec![0.0, 0.0, 1.0]);
    spec.poles[1][1][0] += 1e-6;
    assert!(spec.validate().is_err());
    assert_eq!(BasisSpec::zonal_seeded(3, 3, 11, Normalization::Raw).unwrap(),
               BasisSpec::zonal_seeded(3, 3, 11, Normalization::Raw).unwrap());
}

#[test]
fn gram_rank_examples() {
    let d = 3;
    let m = 3;
    let grid = SphereGrid::for_degree(d, 4 * m).unwrap();
    let polys: Vec<FloatPolynomial> =
        palpha_indices(d, m).iter().map(|a| p_alpha(a, d).unwrap().to_float()).collect();
    let squares: Vec<Box<dyn Fn(&[f64]) -> f64>> =
        polys.iter().map(|p| Box::new(move |x: &[f64]| p.eval(x).powi(2)) as Box<dyn Fn(&[f64]) -> f64>).collect();
    let (rank, sv) = gram_rank(&squares, &grid);
    assert_eq!(rank, harmonic_dim(d, m));
    assert!(sv > 1e-8);

    let z = [0.48, 0.6, 0.64];
    let mz = [-0.48, -0.6, -0.64];
    let w = [0.0, 0.0, 1.0];
    let sq = |zeta: [f64; 3]| move |x: &[f64]| zonal_eval(2, 3, &zeta, x).unwrap().powi(2);
    let grid = SphereGrid::for_degree(3, 8).unwrap();
    assert_eq!(gram_rank(&[sq(z), sq(mz)], &grid).0, 1);
    assert_eq!(gram_rank(&[sq(z), sq(w)], &grid).0, 2);
}
