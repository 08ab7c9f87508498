use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::gram::gram_rank_sampled;
use super::grid::SphereGrid;
use super::palpha::{p_alpha, palpha_indices};
use super::poly::{FloatPolynomial, MultiIndex};
use super::harmonic_dim;
use crate::error::{Error, Result};
use crate::specfun::gegenbauer;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// e^{imφ}, e^{−imφ} (d = 2).
    Fourier2D,
    /// C_m^{d/2−1}(⟨θ, ζ_m^j⟩) for a pole table ζ (d ≥ 3).
    Zonal,
    /// The harmonic polynomials p_α (d ≥ 3).
    PAlpha,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Fourier2D => "fourier2d",
            BasisKind::Zonal => "zonal",
            BasisKind::PAlpha => "palpha",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fourier2d" => Some(BasisKind::Fourier2D),
            "zonal" => Some(BasisKind::Zonal),
            "palpha" => Some(BasisKind::PAlpha),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Raw,
    /// Per-degree Gram–Cholesky orthonormalization under dσ/σ.
    Orthonormal,
}

impl Normalization {
    pub fn name(self) -> &'static str {
        match self {
            Normalization::Raw => "raw",
            Normalization::Orthonormal => "orthonormal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "raw" => Some(Normalization::Raw),
            "orthonormal" => Some(Normalization::Orthonormal),
            _ => None,
        }
    }
}

/// Which spherical-harmonic basis is in force.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSpec {
    pub kind: BasisKind,
    pub dim: usize,
    pub normalization: Normalization,
    /// Zonal only: `poles[m][j]`, j = 0..N(m), with `poles[m][0]` shared.
    pub poles: Vec<Vec<Vec<f64>>>,
}

const UNIT_TOL: f64 = 1e-12;
/// Minimum normalized singular value demanded of generated pole systems.
pub const POLE_SV_FLOOR: f64 = 1e-8;

impl BasisSpec {
    pub fn fourier2d() -> Self {
        BasisSpec { kind: BasisKind::Fourier2D, dim: 2, normalization: Normalization::Raw, poles: vec![] }
    }

    pub fn palpha(dim: usize, normalization: Normalization) -> Result<Self> {
        let s = BasisSpec { kind: BasisKind::PAlpha, dim, normalization, poles: vec![] };
        s.validate()?;
        Ok(s)
    }

    pub fn zonal(dim: usize, poles: Vec<Vec<Vec<f64>>>, normalization: Normalization) -> Result<Self> {
        let s = BasisSpec { kind: BasisKind::Zonal, dim, normalization, poles };
        s.validate()?;
        Ok(s)
    }

    /// Zonal basis with deterministic pseudo-random poles: ζ_m^1 = e_d and
    /// the rest drawn from a seeded Gaussian, redrawn until both the
    /// functions and their squares pass the Gram-rank test.
    pub fn zonal_seeded(dim: usize, max_degree: usize, seed: u64, normalization: Normalization) -> Result<Self> {
        if dim < 3 {
            return Err(Error::UnsupportedBasis { kind: "zonal", dim });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut e = vec![0.0; dim];
        e[dim - 1] = 1.0;
        let mut poles = Vec::with_capacity(max_degree + 1);
        for m in 0..=max_degree {
            let n = harmonic_dim(dim, m);
            let mut attempt = 0;
            loop {
                let mut set = vec![e.clone()];
                while set.len() < n {
                    let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
                    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if norm > 1e-3 {
                        set.push(v.iter().map(|x| x / norm).collect());
                    }
                }
                if m == 0 || poles_independent(dim, m, &set) {
                    poles.push(set);
                    break;
                }
                attempt += 1;
                if attempt > 256 {
                    return Err(Error::Domain(format!("could not draw independent poles for degree {m}")));
                }
            }
        }
        Self::zonal(dim, poles, normalization)
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            BasisKind::Fourier2D if self.dim != 2 => {
                return Err(Error::UnsupportedBasis { kind: "fourier2d", dim: self.dim })
            }
            BasisKind::Zonal | BasisKind::PAlpha if self.dim < 3 => {
                return Err(Error::UnsupportedBasis { kind: self.kind.name(), dim: self.dim })
            }
            _ => {}
        }
        if self.kind != BasisKind::Zonal {
            return Ok(());
        }
        for (m, set) in self.poles.iter().enumerate() {
            let n = harmonic_dim(self.dim, m);
            if set.len() != n {
                return Err(Error::Mismatch(format!("degree {m} needs {n} poles, got {}", set.len())));
            }
            for z in set {
                let norm = z.iter().map(|x| x * x).sum::<f64>().sqrt();
                if z.len() != self.dim || (norm - 1.0).abs() > UNIT_TOL {
                    return Err(Error::Domain(format!("pole {z:?} of degree {m} is not a unit vector in R^{}", self.dim)));
                }
            }
            if set[0] != self.poles[0][0] {
                return Err(Error::Domain(format!("first pole of degree {m} differs from the shared pole")));
            }
        }
        Ok(())
    }

    pub fn is_real(&self) -> bool {
        self.kind != BasisKind::Fourier2D
    }

    /// Highest degree this description covers (zonal bases are limited by
    /// their pole table).
    pub fn max_supported_degree(&self) -> Option<usize> {
        match self.kind {
            BasisKind::Zonal => self.poles.len().checked_sub(1),
            _ => None,
        }
    }
}

fn zonal_values(dim: usize, m: usize, poles: &[Vec<f64>], theta: &[f64], out: &mut Vec<f64>) {
    let lambda = dim as f64 / 2.0 - 1.0;
    out.clear();
    for z in poles {
        let t: f64 = z.iter().zip(theta).map(|(a, b)| a * b).sum();
        out.push(gegenbauer(m, lambda, t.clamp(-1.0, 1.0)));
    }
}

fn poles_independent(dim: usize, m: usize, poles: &[Vec<f64>]) -> bool {
    let grid = match SphereGrid::for_degree(dim, 4 * m) {
        Ok(g) => g,
        Err(_) => return false,
    };
    let n = poles.len();
    let mut cols = vec![Vec::with_capacity(grid.len()); n];
    let mut sq = vec![Vec::with_capacity(grid.len()); n];
    let mut buf = Vec::new();
    for x in grid.nodes() {
        zonal_values(dim, m, poles, x, &mut buf);
        for j in 0..n {
            cols[j].push(buf[j]);
            sq[j].push(buf[j] * buf[j]);
        }
    }
    let (r1, s1) = gram_rank_sampled(&cols, &grid);
    let (r2, s2) = gram_rank_sampled(&sq, &grid);
    r1 == n && r2 == n && s1 > POLE_SV_FLOOR && s2 > POLE_SV_FLOOR
}

#[derive(Debug, Clone)]
struct DegreeData {
    polys: Vec<FloatPolynomial>,
    alphas: Vec<MultiIndex>,
    /// Gram matrix of the raw functions under dσ/σ.
    gram_raw: DMatrix<f64>,
    /// L^{-1} with gram_raw = L Lᵀ, when orthonormalized.
    transform: Option<DMatrix<f64>>,
}

/// A [`BasisSpec`] made ready for evaluation up to a fixed degree: p_α
/// polynomials built, Gram matrices and orthonormalizing transforms
/// computed once.
#[derive(Debug, Clone)]
pub struct Basis {
    spec: BasisSpec,
    max_degree: usize,
    degrees: Vec<DegreeData>,
}

impl Basis {
    pub fn new(spec: BasisSpec, max_degree: usize) -> Result<Self> {
        spec.validate()?;
        if let Some(top) = spec.max_supported_degree() {
            if top < max_degree {
                return Err(Error::Mismatch(format!("pole table covers degrees ≤ {top}, need {max_degree}")));
            }
        }
        let mut degrees = Vec::with_capacity(max_degree + 1);
        for m in 0..=max_degree {
            let n = harmonic_dim(spec.dim, m);
            let (polys, alphas) = if spec.kind == BasisKind::PAlpha {
                let alphas = palpha_indices(spec.dim, m);
                let polys = alphas
                    .iter()
                    .map(|a| p_alpha(a, spec.dim).map(|p| p.to_float()))
                    .collect::<Result<Vec<_>>>()?;
                (polys, alphas)
            } else {
                (vec![], vec![])
            };
            let mut d = DegreeData { polys, alphas, gram_raw: DMatrix::identity(n, n), transform: None };
            if spec.is_real() {
                d.gram_raw = raw_gram(&spec, m, &d)?;
                if spec.normalization == Normalization::Orthonormal {
                    let chol = d
                        .gram_raw
                        .clone()
                        .cholesky()
                        .ok_or_else(|| Error::Domain(format!("degree-{m} Gram matrix is not positive definite")))?;
                    let inv = chol
                        .l()
                        .try_inverse()
                        .ok_or_else(|| Error::Domain(format!("degree-{m} Cholesky factor is singular")))?;
                    d.transform = Some(inv);
                }
            }
            degrees.push(d);
        }
        Ok(Basis { spec, max_degree, degrees })
    }

    pub fn spec(&self) -> &BasisSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn count(&self, m: usize) -> usize {
        harmonic_dim(self.spec.dim, m)
    }

    pub fn is_real(&self) -> bool {
        self.spec.is_real()
    }

    /// Multi-indices of the degree-m p_α functions (empty for other kinds).
    pub fn alphas(&self, m: usize) -> &[MultiIndex] {
        &self.degrees[m].alphas
    }

    fn check_degree(&self, m: usize) -> Result<()> {
        if m > self.max_degree {
            return Err(Error::Mismatch(format!("degree {m} exceeds prepared degree {}", self.max_degree)));
        }
        Ok(())
    }

    fn raw_real(&self, m: usize, theta: &[f64], out: &mut Vec<f64>) {
        match self.spec.kind {
            BasisKind::Zonal => zonal_values(self.spec.dim, m, &self.spec.poles[m], theta, out),
            BasisKind::PAlpha => {
                out.clear();
                out.extend(self.degrees[m].polys.iter().map(|p| p.eval(theta)));
            }
            BasisKind::Fourier2D => unreachable!("Fourier basis is complex"),
        }
    }

    /// All degree-m functions of a real basis at θ.
    pub fn eval_real(&self, m: usize, theta: &[f64]) -> Result<Vec<f64>> {
        self.check_degree(m)?;
        if !self.is_real() {
            return Err(Error::UnsupportedBasis { kind: "fourier2d (complex) as real", dim: 2 });
        }
        let mut raw = Vec::new();
        self.raw_real(m, theta, &mut raw);
        Ok(match &self.degrees[m].transform {
            Some(t) => (t * DVector::from_vec(raw)).iter().copied().collect(),
            None => raw,
        })
    }

    /// All degree-m functions at θ.
    pub fn eval_degree(&self, m: usize, theta: &[f64]) -> Result<Vec<Complex64>> {
        if self.spec.kind == BasisKind::Fourier2D {
            self.check_degree(m)?;
            let phi = theta[1].atan2(theta[0]);
            if m == 0 {
                return Ok(vec![Complex64::new(1.0, 0.0)]);
            }
            let e = Complex64::from_polar(1.0, m as f64 * phi);
            return Ok(vec![e, e.conj()]);
        }
        Ok(self.eval_real(m, theta)?.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    /// The j-th (1-based) degree-m function at θ.
    pub fn eval(&self, m: usize, j: usize, theta: &[f64]) -> Result<Complex64> {
        let n = self.count(m);
        if j == 0 || j > n {
            return Err(Error::IndexOutOfRange { degree: m, index: j, count: n });
        }
        Ok(self.eval_degree(m, theta)?[j - 1])
    }

    /// Gram matrix of the degree-m functions in force under dσ/σ
    /// (identity for Fourier and orthonormalized bases).
    pub fn gram(&self, m: usize) -> DMatrix<f64> {
        let n = self.count(m);
        if !self.is_real() || self.degrees[m].transform.is_some() {
            DMatrix::identity(n, n)
        } else {
            self.degrees[m].gram_raw.clone()
        }
    }
}

fn raw_gram(spec: &BasisSpec, m: usize, d: &DegreeData) -> Result<DMatrix<f64>> {
    let grid = SphereGrid::for_degree(spec.dim, 2 * m)?;
    let n = harmonic_dim(spec.dim, m);
    let mut g = DMatrix::zeros(n, n);
    let mut buf = Vec::new();
    for (x, w) in grid.nodes().iter().zip(grid.weights()) {
        match spec.kind {
            BasisKind::Zonal => zonal_values(spec.dim, m, &spec.poles[m], x, &mut buf),
            _ => {
                buf.clear();
                buf.extend(d.polys.iter().map(|p| p.eval(x)));
            }
        }
        for i in 0..n {
            for k in 0..n {
                g[(i, k)] += w * buf[i] * buf[k];
            }
        }
    }
    Ok(g / grid.area())
}

/// Fourier degree-m functions at angle φ (helper for d = 2 callers).
pub fn fourier_pair(m: usize, phi: f64) -> (Complex64, Complex64) {
    let e = Complex64::from_polar(1.0, m as f64 * phi);
    (e, e.conj())
}

