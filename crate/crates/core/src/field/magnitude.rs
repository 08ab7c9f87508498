use std::f64::consts::PI;

use num_complex::Complex64;

use super::{radial_factors, HerglotzField};
use crate::error::{Error, Result};
use crate::harmonics::{BasisKind, SphereGrid};

/// Unordered degree pairs m ≤ n ≤ M in index order.
pub fn pairs(max_degree: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=max_degree).flat_map(move |m| (m..=max_degree).map(move |n| (m, n)))
}

pub fn pair_count(max_degree: usize) -> usize {
    (max_degree + 1) * (max_degree + 2) / 2
}

/// Position of (m, n), m ≤ n, in [`pairs`].
pub fn pair_index(m: usize, n: usize, max_degree: usize) -> usize {
    debug_assert!(m <= n && n <= max_degree);
    m * (2 * max_degree + 3 - m) / 2 + (n - m)
}

/// Exact angular spectrum of Re c_{m,n}(φ) for d = 2: the real
/// trigonometric polynomial with coefficient `high` at frequency m+n and
/// `low` at n−m,
///
///   Re c_{m,n}(φ) = T(m+n, high) + T(n−m, low),
///   T(0, c) = c,  T(q, c) = 2 Re(c e^{iqφ}).
///
/// When m = 0 both frequencies coincide and everything sits in `high`
/// (`low` = 0); when m = n the zero-frequency `low` is real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSpectrum {
    pub m: usize,
    pub n: usize,
    pub high: Complex64,
    pub low: Complex64,
}

fn term(q: usize, c: Complex64, phi: f64) -> f64 {
    if q == 0 {
        c.re
    } else {
        2.0 * (c * Complex64::from_polar(1.0, q as f64 * phi)).re
    }
}

impl PairSpectrum {
    /// From (a, b) = (û(m), û(−m)) and (c, d) = (û(n), û(−n)); pass zero
    /// for the unused entry at degree 0.
    pub fn from_coefficients(m: usize, n: usize, a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        let s = (a * d.conj() + b.conj() * c) / 2.0;
        let t = (b * d.conj() + a.conj() * c) / 2.0;
        Self::from_terms(m, n, [(m as i64 + n as i64, s), (-(m as i64 + n as i64), s.conj()), (n as i64 - m as i64, t), (m as i64 - n as i64, t.conj())])
    }

    /// Fold four (frequency, coefficient) terms of a real trigonometric
    /// polynomial at ±(m+n), ±(n−m) into canonical form.
    pub fn from_terms(m: usize, n: usize, terms: [(i64, Complex64); 4]) -> Self {
        let (q, p) = ((m + n) as i64, (n as i64 - m as i64).abs());
        let at = |f: i64| -> Complex64 { terms.iter().filter(|t| t.0 == f).map(|t| t.1).sum() };
        let clean = |f: i64, c: Complex64| if f == 0 { Complex64::new(c.re, 0.0) } else { c };
        if q == p {
            PairSpectrum { m, n, high: clean(q, at(q)), low: Complex64::new(0.0, 0.0) }
        } else {
            PairSpectrum { m, n, high: clean(q, at(q)), low: clean(p, at(p)) }
        }
    }

    /// Four terms at +(m+n), −(m+n), +(n−m), −(n−m) summing to the
    /// function, splitting evenly where frequencies coincide.
    pub fn four_terms(&self) -> [(i64, Complex64); 4] {
        let (q, p) = ((self.m + self.n) as i64, (self.n as i64 - self.m as i64).abs());
        let (h, l) = (self.high, self.low);
        match (q == p, q == 0, p == 0) {
            (true, true, _) => [(0, h / 4.0); 4],
            (true, false, _) => [(q, h / 2.0), (-q, h.conj() / 2.0), (q, h / 2.0), (-q, h.conj() / 2.0)],
            (false, _, true) => [(q, h), (-q, h.conj()), (0, l / 2.0), (0, l / 2.0)],
            (false, _, false) => [(q, h), (-q, h.conj()), (p, l), (-p, l.conj())],
        }
    }

    pub fn high_freq(&self) -> usize {
        self.m + self.n
    }

    pub fn low_freq(&self) -> usize {
        self.n - self.m
    }

    pub fn eval(&self, phi: f64) -> f64 {
        let v = term(self.high_freq(), self.high, phi);
        if self.m == 0 {
            v
        } else {
            v + term(self.low_freq(), self.low, phi)
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.high.norm().max(self.low.norm())
    }
}

/// Re c_{m,n} sampled on a sphere grid, indexed by [`pair_index`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPairs {
    pub grid: SphereGrid,
    pub values: Vec<Vec<f64>>,
}

/// The family Re c_{m,n}, 0 ≤ m ≤ n ≤ M: exact spectra (d = 2) and/or
/// samples on a sphere grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeData {
    pub dim: usize,
    pub max_degree: usize,
    pub spectra: Option<Vec<PairSpectrum>>,
    pub samples: Option<SampledPairs>,
}

/// Grid used for sampled magnitude data: exact for degree-4M integrands,
/// enough to project Re c_{m,n} against products Y_k Y_l.
pub fn data_grid(dim: usize, max_degree: usize) -> Result<SphereGrid> {
    SphereGrid::for_degree(dim, (4 * max_degree).max(2))
}

impl MagnitudeData {
    pub fn spectrum(&self, m: usize, n: usize) -> Option<&PairSpectrum> {
        let (m, n) = (m.min(n), m.max(n));
        if n > self.max_degree {
            return None;
        }
        self.spectra.as_ref().map(|s| &s[pair_index(m, n, self.max_degree)])
    }

    pub fn sample(&self, m: usize, n: usize) -> Option<&[f64]> {
        let (m, n) = (m.min(n), m.max(n));
        if n > self.max_degree {
            return None;
        }
        self.samples.as_ref().map(|s| s.values[pair_index(m, n, self.max_degree)].as_slice())
    }

    /// Largest stored magnitude: the scale for relative tolerances.
    pub fn scale(&self) -> f64 {
        let a = self.spectra.iter().flatten().map(PairSpectrum::max_abs).fold(0.0, f64::max);
        let b = self.samples.iter().flat_map(|s| s.values.iter().flatten()).fold(0.0f64, |acc, v| acc.max(v.abs()));
        a.max(b)
    }

    /// Multiply every stored function by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        if let Some(sp) = out.spectra.as_mut() {
            for p in sp {
                p.high *= s;
                p.low *= s;
            }
        }
        if let Some(sm) = out.samples.as_mut() {
            sm.values.iter_mut().flatten().for_each(|v| *v *= s);
        }
        out
    }

    /// `self − other`, pair by pair; both must be stored alike.
    pub fn difference(&self, other: &MagnitudeData) -> Result<MagnitudeData> {
        if self.dim != other.dim || self.max_degree != other.max_degree {
            return Err(Error::Mismatch("magnitude data of different shape".into()));
        }
        let spectra = match (&self.spectra, &other.spectra) {
            (Some(a), Some(b)) => Some(
                a.iter().zip(b).map(|(x, y)| PairSpectrum { high: x.high - y.high, low: x.low - y.low, ..*x }).collect(),
            ),
            (None, _) => None,
            (Some(_), None) => return Err(Error::Mismatch("missing spectra".into())),
        };
        let samples = match (&self.samples, &other.samples) {
            (Some(a), Some(b)) if a.grid == b.grid => Some(SampledPairs {
                grid: a.grid.clone(),
                values: a.values.iter().zip(&b.values).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect(),
            }),
            (None, _) => None,
            _ => return Err(Error::Mismatch("samples on different grids".into())),
        };
        Ok(MagnitudeData { dim: self.dim, max_degree: self.max_degree, spectra, samples })
    }

    /// Max deviation against `other`: coefficientwise on spectra when both
    /// carry them, nodewise on samples otherwise.
    pub fn deviation(&self, other: &MagnitudeData) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::Mismatch(format!("dimension {} vs {}", self.dim, other.dim)));
        }
        let top = self.max_degree.max(other.max_degree);
        if let (Some(_), Some(_)) = (&self.spectra, &other.spectra) {
            let zero = Complex64::new(0.0, 0.0);
            let mut dev = 0.0f64;
            for (m, n) in pairs(top) {
                let a = self.spectrum(m, n).map_or((zero, zero), |p| (p.high, p.low));
                let b = other.spectrum(m, n).map_or((zero, zero), |p| (p.high, p.low));
                dev = dev.max((a.0 - b.0).norm()).max((a.1 - b.1).norm());
            }
            return Ok(dev);
        }
        match (&self.samples, &other.samples) {
            (Some(x), Some(y)) if x.grid == y.grid => {
                let mut dev = 0.0f64;
                for (m, n) in pairs(top) {
                    let a = self.sample(m, n);
                    let b = other.sample(m, n);
                    for i in 0..x.grid.len() {
                        let va = a.map_or(0.0, |s| s[i]);
                        let vb = b.map_or(0.0, |s| s[i]);
                        dev = dev.max((va - vb).abs());
                    }
                }
                Ok(dev)
            }
            _ => Err(Error::Mismatch("magnitude data are not stored in comparable forms".into())),
        }
    }
}

/// Re c_{m,n}(u) for all pairs: exact spectra for d = 2, plus samples on
/// `grid` (for d ≥ 3 a default [`data_grid`] is used when none is given).
pub fn magnitude_coeffs(u: &HerglotzField, grid: Option<&SphereGrid>) -> MagnitudeData {
    let big_m = u.max_degree();
    let spectra = (u.spec().kind == BasisKind::Fourier2D).then(|| {
        let zero = Complex64::new(0.0, 0.0);
        let pm = |m: usize| {
            if m == 0 {
                (u.fourier_coeff(0), zero)
            } else {
                (u.fourier_coeff(m as i64), u.fourier_coeff(-(m as i64)))
            }
        };
        pairs(big_m)
            .map(|(m, n)| {
                let (a, b) = pm(m);
                let (c, d) = pm(n);
                PairSpectrum::from_coefficients(m, n, a, b, c, d)
            })
            .collect()
    });
    let owned;
    let grid = match grid {
        Some(g) => Some(g),
        None if u.dim() >= 3 => {
            owned = data_grid(u.dim(), big_m).expect("supported dimension");
            Some(&owned)
        }
        None => None,
    };
    let samples = grid.map(|g| sample_pairs(u, g));
    MagnitudeData { dim: u.dim(), max_degree: big_m, spectra, samples }
}

fn sample_pairs(u: &HerglotzField, grid: &SphereGrid) -> SampledPairs {
    let big_m = u.max_degree();
    let mut values = vec![Vec::with_capacity(grid.len()); pair_count(big_m)];
    for x in grid.nodes() {
        let f = u.angular_parts(x);
        for (idx, (m, n)) in pairs(big_m).enumerate() {
            let v = if m == n { f[m].norm_sqr() } else { (f[m] * f[n].conj()).re };
            values[idx].push(v);
        }
    }
    SampledPairs { grid: grid.clone(), values }
}

/// Outcome of comparing two fields' magnitudes along both routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnitudeComparison {
    /// max |Re c_{m,n}(u) − Re c_{m,n}(v)| over pairs and angular nodes.
    pub coefficient_deviation: f64,
    /// max ||u|² − |v|²| over a polar grid.
    pub grid_deviation: f64,
    pub coefficient_equal: bool,
    pub grid_equal: bool,
}

impl MagnitudeComparison {
    pub fn agree(&self) -> bool {
        self.coefficient_equal == self.grid_equal
    }
}

/// Compare Re c_{m,n} of `u` and `v` (tolerance `tol`, absolute) and,
/// independently, |u|² against |v|² on a polar grid reaching radius
/// max(1, M+2) so that every degree contributes visibly. The grid
/// tolerance 2π(M+1)²·tol is the image of `tol` under the synthesis map,
/// so equal data always pass both checks.
pub fn compare_magnitudes(u: &HerglotzField, v: &HerglotzField, tol: f64) -> Result<MagnitudeComparison> {
    if u.dim() != v.dim() {
        return Err(Error::Mismatch(format!("dimension {} vs {}", u.dim(), v.dim())));
    }
    let big_m = u.max_degree().max(v.max_degree());
    let (u, v) = (u.padded(big_m)?, v.padded(big_m)?);
    let dim = u.dim();

    let angular = if dim == 2 { SphereGrid::new(2, 4 * big_m + 4)? } else { data_grid(dim, big_m)? };
    let mut coef_dev = 0.0f64;
    for x in angular.nodes() {
        let (fu, fv) = (u.angular_parts(x), v.angular_parts(x));
        for (m, n) in pairs(big_m) {
            let a = (fu[m] * fu[n].conj()).re;
            let b = (fv[m] * fv[n].conj()).re;
            coef_dev = coef_dev.max((a - b).abs());
        }
    }

    let radius = (big_m as f64 + 2.0).max(1.0);
    let mut grid_dev = 0.0f64;
    for r in super::chebyshev_radii(2 * big_m + 4, radius) {
        let radial = radial_factors(dim, big_m, r);
        for x in angular.nodes() {
            let a = u.eval_with(&radial, x).norm_sqr();
            let b = v.eval_with(&radial, x).norm_sqr();
            grid_dev = grid_dev.max((a - b).abs());
        }
    }
    let grid_tol = 2.0 * PI * ((big_m + 1) as f64).powi(2) * tol;
    Ok(MagnitudeComparison {
        coefficient_deviation: coef_dev,
        grid_deviation: grid_dev,
        coefficient_equal: coef_dev <= tol,
        grid_equal: grid_dev <= grid_tol,
    })
}

/// Equality of magnitudes through Re c_{m,n}(u) = Re c_{m,n}(v) for all pairs
/// within `tol`. Fields of different dimension are never equal.
pub fn equal_magnitude(u: &HerglotzField, v: &HerglotzField, tol: f64) -> bool {
    compare_magnitudes(u, v, tol).map(|c| c.coefficient_equal).unwrap_or(false)
}
