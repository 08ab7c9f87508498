//! Herglotz fields
//!
//!   u(rθ) = (2π)^{1/2} r^{−(d−2)/2} Σ_m Σ_j a_{m,j} J_{m+(d−2)/2}(r) Y_m^j(θ),
//!
//! their magnitude data Re c_{m,n}(θ) = Re(F_m(θ) conj F_n(θ)) with
//! F_m = Σ_j a_{m,j} Y_m^j, and the verifiers built on them.

mod equivalence;
pub mod io;
mod magnitude;
mod random;
mod samples;

pub use equivalence::{trivially_equivalent, TrivialEquivalence, Verdict};
pub use magnitude::{
    compare_magnitudes, data_grid, equal_magnitude, magnitude_coeffs, pair_count, pair_index, pairs,
    MagnitudeComparison, MagnitudeData, PairSpectrum, SampledPairs,
};
pub use random::FieldGenerator;
pub use samples::{chebyshev_radii, sample_magnitude_grid, MagnitudeGrid};

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::harmonics::{Basis, BasisKind, BasisSpec, SphereGrid};
use crate::specfun::{bessel_j, radial_factor, BesselOrder, SeriesBudget};

/// Default working radius.
pub const DEFAULT_ETA: f64 = 1.0;

/// A K-finite Herglotz field: coefficients a_{m,j}, 0 ≤ m ≤ M, in a
/// prepared basis.
#[derive(Debug, Clone)]
pub struct HerglotzField {
    basis: Arc<Basis>,
    coeffs: Vec<Vec<Complex64>>,
}

/// r^{−α} J_{m+α}(r) for m = 0..=max_degree.
pub fn radial_factors(dim: usize, max_degree: usize, r: f64) -> Vec<f64> {
    (0..=max_degree)
        .map(|m| match radial_factor(m, dim, r, SeriesBudget::generous()) {
            Ok(v) => v,
            Err(Error::Convergence { partial, .. }) => partial,
            Err(e) => panic!("radial factor at r = {r}: {e}"),
        })
        .collect()
}

impl HerglotzField {
    pub fn new(basis: Arc<Basis>, coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Mismatch("a field needs at least the degree-0 coefficient".into()));
        }
        if coeffs.len() > basis.max_degree() + 1 {
            return Err(Error::Mismatch(format!(
                "field has degree {} but the basis is prepared up to {}",
                coeffs.len() - 1,
                basis.max_degree()
            )));
        }
        for (m, a) in coeffs.iter().enumerate() {
            if a.len() != basis.count(m) {
                return Err(Error::Mismatch(format!("degree {m} needs {} coefficients, got {}", basis.count(m), a.len())));
            }
        }
        Ok(HerglotzField { basis, coeffs })
    }

    pub fn zeros(basis: Arc<Basis>, max_degree: usize) -> Result<Self> {
        let coeffs = (0..=max_degree).map(|m| vec![Complex64::new(0.0, 0.0); basis.count(m)]).collect();
        Self::new(basis, coeffs)
    }

    /// A prepared 2-D Fourier basis.
    pub fn fourier_basis(max_degree: usize) -> Arc<Basis> {
        Arc::new(Basis::new(BasisSpec::fourier2d(), max_degree).expect("Fourier basis"))
    }

    /// d = 2 field from û(k), k = −M..=M.
    pub fn from_fourier(max_degree: usize, uhat: impl Fn(i64) -> Complex64) -> Self {
        let coeffs = (0..=max_degree)
            .map(|m| {
                let m = m as i64;
                if m == 0 {
                    vec![uhat(0)]
                } else {
                    vec![uhat(m), uhat(-m)]
                }
            })
            .collect();
        Self::new(Self::fourier_basis(max_degree), coeffs).expect("consistent Fourier coefficients")
    }

    /// û(k) of a d = 2 Fourier field.
    pub fn fourier_coeff(&self, k: i64) -> Complex64 {
        assert_eq!(self.basis.spec().kind, BasisKind::Fourier2D, "Fourier coefficients need the Fourier basis");
        let m = k.unsigned_abs() as usize;
        if m > self.max_degree() {
            return Complex64::new(0.0, 0.0);
        }
        match (m, k < 0) {
            (0, _) => self.coeffs[0][0],
            (_, false) => self.coeffs[m][0],
            (_, true) => self.coeffs[m][1],
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn spec(&self) -> &BasisSpec {
        self.basis.spec()
    }

    pub fn coeffs(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Vec<Complex64>] {
        &mut self.coeffs
    }

    /// Coefficients in degree-major, index-minor order.
    pub fn flat(&self) -> Vec<Complex64> {
        self.coeffs.iter().flatten().copied().collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.norm_sqr() == 0.0)
    }

    /// Zero-padded copy of degree `max_degree` (never truncates).
    pub fn padded(&self, max_degree: usize) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        for m in coeffs.len()..=max_degree {
            coeffs.push(vec![Complex64::new(0.0, 0.0); self.basis.count(m)]);
        }
        Self::new(self.basis.clone(), coeffs)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.iter().map(|x| x * c).collect()).collect();
        HerglotzField { basis: self.basis.clone(), coeffs }
    }

    /// The field ū as a coefficient transform: swap-and-conjugate in the
    /// Fourier basis, entrywise conjugation in real bases.
    pub fn conjugate(&self) -> Self {
        let fourier = self.spec().kind == BasisKind::Fourier2D;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, a)| {
                if fourier && m > 0 {
                    vec![a[1].conj(), a[0].conj()]
                } else {
                    a.iter().map(|x| x.conj()).collect()
                }
            })
            .collect();
        HerglotzField { basis: self.basis.clone(), coeffs }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.spec() != other.spec() {
            return Err(Error::Mismatch("fields live in different bases".into()));
        }
        let top = self.max_degree().max(other.max_degree());
        let (a, b) = (self.padded(top)?, other.padded(top)?);
        let coeffs =
            a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect()).collect();
        Self::new(self.basis.clone(), coeffs)
    }

    /// F_m(θ) = Σ_j a_{m,j} Y_m^j(θ) for every degree.
    pub fn angular_parts(&self, theta: &[f64]) -> Vec<Complex64> {
        (0..=self.max_degree())
            .map(|m| {
                let y = self.basis.eval_degree(m, theta).expect("degree within basis");
                self.coeffs[m].iter().zip(&y).map(|(a, y)| a * y).sum()
            })
            .collect()
    }

    /// u(rθ); at r = 0 only the degree-0 term survives.
    pub fn eval(&self, r: f64, theta: &[f64]) -> Complex64 {
        let radial = radial_factors(self.dim(), self.max_degree(), r);
        self.eval_with(&radial, theta)
    }

    pub(crate) fn eval_with(&self, radial: &[f64], theta: &[f64]) -> Complex64 {
        let f = self.angular_parts(theta);
        (2.0 * PI).sqrt() * f.iter().zip(radial).map(|(f, r)| f * r).sum::<Complex64>()
    }

    pub fn magnitude_sq(&self, r: f64, theta: &[f64]) -> f64 {
        self.eval(r, theta).norm_sqr()
    }

    /// |u(rθ)|² through 2π Σ_{m,n} Re c_{m,n}(θ) R_m(r) R_n(r).
    pub fn magnitude_sq_via_pairs(&self, r: f64, theta: &[f64]) -> f64 {
        let radial = radial_factors(self.dim(), self.max_degree(), r);
        let f = self.angular_parts(theta);
        let mut acc = 0.0;
        for m in 0..f.len() {
            for n in m..f.len() {
                let w = if m == n { 1.0 } else { 2.0 };
                acc += w * (f[m] * f[n].conj()).re * radial[m] * radial[n];
            }
        }
        2.0 * PI * acc
    }

    /// Σ_k |a_{m,k}|² in orthonormalized coordinates, i.e. aᴴ G a with G
    /// the degree-m Gram matrix under dσ/σ.
    pub fn degree_power(&self, m: usize) -> f64 {
        if m > self.max_degree() {
            return 0.0;
        }
        let a = &self.coeffs[m];
        let g: DMatrix<f64> = self.basis.gram(m);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..a.len() {
            for k in 0..a.len() {
                acc += a[i].conj() * g[(i, k)] * a[k];
            }
        }
        acc.re.max(0.0)
    }

    /// a_{0,1} recovered from the mean of u over ηS^{d−1}:
    /// η^{(d−2)/2} ∫ u dσ / ((2π)^{1/2} σ J_{(d−2)/2}(η)).
    pub fn mean_coefficient(&self, eta: f64) -> Result<Complex64> {
        let order = BesselOrder::for_degree(0, self.dim());
        let j = bessel_j(order, eta, SeriesBudget::generous())?;
        if j.abs() < 1e-10 || !(eta > 0.0) {
            return Err(Error::BesselZero { order: order.value(), eta });
        }
        let grid = SphereGrid::for_degree(self.dim(), self.max_degree() + 1)?;
        let radial = radial_factors(self.dim(), self.max_degree(), eta);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in grid.nodes().iter().zip(grid.weights()) {
            acc += self.eval_with(&radial, x) * w;
        }
        let alpha = (self.dim() as f64 - 2.0) / 2.0;
        Ok(acc * eta.powf(alpha) / ((2.0 * PI).sqrt() * grid.area() * j))
    }
}
