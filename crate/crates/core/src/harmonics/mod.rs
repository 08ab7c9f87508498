//! Spherical harmonics on S^{d−1}: the 2-D Fourier basis, zonal
//! Gegenbauer bases, the p_α basis, product quadrature grids, and Gram
//! rank tests.

mod basis;
mod gram;
mod grid;
mod palpha;
mod poly;

pub use basis::{fourier_pair, Basis, BasisKind, BasisSpec, Normalization, POLE_SV_FLOOR};
pub use gram::{gram_rank, gram_rank_sampled, RANK_TOL};
pub use grid::{angles_of, point_from_angles, sphere_area, sphere_grid, SphereGrid};
pub use palpha::{p_alpha, palpha_indices};
pub use poly::{laplacian, FloatPolynomial, MultiIndex, Polynomial};

use crate::error::{Error, Result};

fn binomial(n: i64, k: i64) -> usize {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as usize
}

/// N(m) = C(m+d−1, m) − C(m+d−3, m−2): dimension of degree-m harmonics.
pub fn harmonic_dim(dim: usize, m: usize) -> usize {
    let (d, m) = (dim as i64, m as i64);
    binomial(m + d - 1, m) - if m >= 2 { binomial(m + d - 3, m - 2) } else { 0 }
}

fn check_unit(v: &[f64], what: &str) -> Result<()> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("{what} has norm {n}, expected a unit vector")));
    }
    Ok(())
}

/// C_m^{d/2−1}(⟨θ, ζ⟩).
pub fn zonal_eval(m: usize, dim: usize, zeta: &[f64], theta: &[f64]) -> Result<f64> {
    if dim < 3 {
        return Err(Error::UnsupportedBasis { kind: "zonal", dim });
    }
    if zeta.len() != dim || theta.len() != dim {
        return Err(Error::Mismatch(format!("vectors must live in R^{dim}")));
    }
    check_unit(zeta, "pole")?;
    check_unit(theta, "point")?;
    let t: f64 = zeta.iter().zip(theta).map(|(a, b)| a * b).sum();
    Ok(crate::specfun::gegenbauer(m, dim as f64 / 2.0 - 1.0, t.clamp(-1.0, 1.0)))
}

/// The j-th (1-based) degree-m function of `spec` at θ.
pub fn basis_eval(spec: &BasisSpec, m: usize, j: usize, theta: &[f64]) -> Result<num_complex::Complex64> {
    check_unit(theta, "point")?;
    Basis::new(spec.clone(), m)?.eval(m, j, theta)
}
