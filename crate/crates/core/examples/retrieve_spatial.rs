//! The d = 3 special cases: nonvanishing mean, sparse fields, real fields.

use std::sync::Arc;

use herglotz::field::*;
use herglotz::harmonics::*;
use herglotz::retrieve::*;
use num_complex::Complex64;

fn main() {
    let opts = RetrieveOptions::default();
    let basis = Arc::new(Basis::new(BasisSpec::palpha(3, Normalization::Orthonormal).unwrap(), 3).unwrap());

    let u = FieldGenerator::new(3).generate_seeded(basis.clone(), 21).unwrap();
    let r = retrieve_3d_mean(&magnitude_coeffs(&u, None), &basis, &opts).unwrap();
    println!("mean:   residual {:.1e}, vs original {}", r.residual, trivially_equivalent(&r.field, &u, 1e-8).unwrap().verdict.name());

    let zonal = Arc::new(Basis::new(BasisSpec::zonal_seeded(3, 3, 4, Normalization::Raw).unwrap(), 3).unwrap());
    let g = FieldGenerator { sparse: true, zero_mean: true, ..FieldGenerator::new(3) };
    let u = g.generate_seeded(zonal.clone(), 22).unwrap();
    let r = retrieve_3d_sparse(&magnitude_coeffs(&u, None), &zonal, &opts).unwrap();
    let support: Vec<Option<usize>> = r.field.coeffs().iter().map(|a| a.iter().position(|c| c.norm() > 1e-9)).collect();
    println!("sparse: residual {:.1e}, support {support:?}, vs original {}", r.residual, trivially_equivalent(&r.field, &u, 1e-8).unwrap().verdict.name());

    let u = FieldGenerator { real: true, ..FieldGenerator::new(3) }.generate_seeded(basis.clone(), 23).unwrap();
    let r = retrieve(&magnitude_coeffs(&u, None), Some(&basis), &RetrieveOptions { branch: Branch::Real, ..opts }).unwrap();
    println!("real:   residual {:.1e}, class {}", r.residual, r.class.name());
    for s in [1.0, -1.0] {
        println!("  sign of v = {s}·u: {}", retrieve_3d_real(&u, &u.scaled(Complex64::new(s, 0.0)), 1e-6).unwrap());
    }

    let dense = FieldGenerator { zero_mean: true, ..FieldGenerator::new(2) }.generate_seeded(basis.clone(), 24).unwrap();
    println!("dense zero-mean field, mean branch: {}", retrieve_3d_mean(&magnitude_coeffs(&dense, None), &basis, &opts).unwrap_err());
}
