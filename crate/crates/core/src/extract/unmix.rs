use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::angular::{legendre, RadialProfile};
use crate::error::{Error, Result};
use crate::field::{pairs, radial_factors};
use crate::specfun::bessel_product_coefficients;

/// Condition estimate above which a solve is flagged.
pub const CONDITION_WARNING: f64 = 1e10;
/// Relative singular value below which the design counts as singular.
const RANK_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnmixMethod {
    /// Least squares on the radial grid against exact Bessel products.
    LeastSquares,
    /// Match the even-power expansion about r = 0.
    Taylor,
}

impl UnmixMethod {
    pub fn name(self) -> &'static str {
        match self {
            UnmixMethod::LeastSquares => "least-squares",
            UnmixMethod::Taylor => "taylor",
        }
    }
}

/// One unknown of a profile: the coefficient of pair (m, n) carried at
/// this frequency, with the angular weight `coupling` (1 for d = 2; the
/// Legendre coefficient of P_m P_n at the profile degree for d = 3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTerm {
    pub m: usize,
    pub n: usize,
    pub coupling: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnmixReport {
    pub frequencies: Vec<usize>,
    pub pairs: Vec<(usize, usize)>,
    /// Symmetrized coefficients γ_{m,n} aligned with `pairs`.
    pub coefficients: Vec<Complex64>,
    /// Max |g − model| over the radial nodes.
    pub residual: f64,
    /// Ratio of extreme singular values after column normalization.
    pub condition: f64,
    pub warning: Option<String>,
}

/// (2q+1)/2 ∫ P_m P_n P_q over [−1, 1].
pub fn legendre_coupling(m: usize, n: usize, q: usize) -> f64 {
    if q > m + n || q < m.abs_diff(n) || (m + n + q) % 2 == 1 {
        return 0.0;
    }
    let nodes = NonZeroUsize::new((m + n + q) / 2 + 1).unwrap();
    let s: f64 = GaussLegendre::new(nodes)
        .as_node_weight_pairs()
        .iter()
        .map(|&(t, w)| w * legendre(m, t) * legendre(n, t) * legendre(q, t))
        .sum();
    (2 * q + 1) as f64 / 2.0 * s
}

/// Pairs whose Re c_{m,n} feeds frequency q. d = 2: m+n = q (the `high`
/// coefficient) or n−m = q with m ≥ 1 (the `low` one); d = 3 zonal:
/// |m−n| ≤ q ≤ m+n with even m+n+q.
pub fn compatible_pairs(dim: usize, q: usize, max_degree: usize) -> Vec<PairTerm> {
    pairs(max_degree)
        .filter_map(|(m, n)| match dim {
            2 if m + n == q || (m >= 1 && n - m == q) => Some(PairTerm { m, n, coupling: 1.0 }),
            2 => None,
            _ => {
                let l = legendre_coupling(m, n, q);
                (l.abs() > 1e-14).then_some(PairTerm { m, n, coupling: l })
            }
        })
        .collect()
}

fn weight(t: &PairTerm) -> f64 {
    if t.m == t.n {
        1.0
    } else {
        2.0
    }
}

/// Design column entries 2π w L R_m(r) R_n(r), R_m = r^{−α} J_{m+α}.
fn design(dim: usize, max_degree: usize, radii: &[f64], terms: &[PairTerm]) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(radii.len(), terms.len());
    for (i, &r) in radii.iter().enumerate() {
        let rf = radial_factors(dim, max_degree, r);
        for (k, t) in terms.iter().enumerate() {
            a[(i, k)] = 2.0 * PI * weight(t) * t.coupling * rf[t.m] * rf[t.n];
        }
    }
    a
}

struct Solution {
    x: DMatrix<f64>,
    condition: f64,
}

/// Column-normalized SVD least squares; singular designs name the
/// unknowns that take part in the null direction.
fn lstsq(a: &DMatrix<f64>, b: &DMatrix<f64>, labels: &[(usize, usize)]) -> Result<Solution> {
    let ncol = a.ncols();
    if ncol == 0 {
        return Ok(Solution { x: DMatrix::zeros(0, b.ncols()), condition: 1.0 });
    }
    if a.nrows() < ncol {
        return Err(Error::RankDeficient { pairs: labels.to_vec() });
    }
    let norms: Vec<f64> = (0..ncol).map(|k| a.column(k).norm()).collect();
    if let Some(k) = norms.iter().position(|&v| v == 0.0) {
        return Err(Error::RankDeficient { pairs: vec![labels[k]] });
    }
    let mut an = a.clone();
    for (k, &s) in norms.iter().enumerate() {
        an.column_mut(k).scale_mut(1.0 / s);
    }
    let svd = an.svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let (imin, smin) = sv.iter().copied().enumerate().fold((0, f64::INFINITY), |a, (i, s)| if s < a.1 { (i, s) } else { a });
    let vt = svd.v_t.as_ref().expect("right singular vectors");
    if smin <= RANK_TOL * smax {
        let null = vt.row(imin);
        let pairs = labels.iter().zip(null.iter()).filter(|(_, v)| v.abs() > 0.1).map(|(l, _)| *l).collect();
        return Err(Error::RankDeficient { pairs });
    }
    let u = svd.u.as_ref().expect("left singular vectors");
    let mut utb = u.transpose() * b;
    for (i, s) in sv.iter().enumerate() {
        utb.row_mut(i).scale_mut(1.0 / s);
    }
    let mut x = vt.transpose() * utb;
    for (k, &s) in norms.iter().enumerate() {
        x.row_mut(k).scale_mut(1.0 / s);
    }
    Ok(Solution { x, condition: smax / smin })
}

/// Power-basis coefficients of T_j(2u − 1), j < count.
fn shifted_chebyshev(count: usize) -> Vec<Vec<f64>> {
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(count);
    for j in 0..count {
        let mut row = vec![0.0; count];
        match j {
            0 => row[0] = 1.0,
            1 => {
                row[0] = -1.0;
                row[1] = 2.0;
            }
            _ => {
                for k in 0..count {
                    let prev = t[j - 1][k];
                    row[k] += -2.0 * prev - t[j - 2][k];
                    if k + 1 < count {
                        row[k + 1] += 4.0 * prev;
                    }
                }
            }
        }
        t.push(row);
    }
    t
}

fn rhs(values: &[Complex64]) -> DMatrix<f64> {
    DMatrix::from_fn(values.len(), 2, |i, j| if j == 0 { values[i].re } else { values[i].im })
}

fn to_complex(x: &DMatrix<f64>) -> Vec<Complex64> {
    (0..x.nrows()).map(|i| Complex64::new(x[(i, 0)], x[(i, 1)])).collect()
}

/// A block of the radial system: one profile and its unknowns, each
/// pointing into a shared coefficient vector.
pub(crate) struct Block<'a> {
    pub profile: &'a RadialProfile,
    pub terms: Vec<(usize, PairTerm)>,
}

fn forward_residual(blocks: &[Block], dim: usize, max_degree: usize, gamma: &[Complex64]) -> f64 {
    let mut res = 0.0f64;
    for b in blocks {
        let terms: Vec<PairTerm> = b.terms.iter().map(|t| t.1).collect();
        let a = design(dim, max_degree, &b.profile.radii, &terms);
        for (i, v) in b.profile.values.iter().enumerate() {
            let model: Complex64 = b.terms.iter().enumerate().map(|(k, (u, _))| gamma[*u] * a[(i, k)]).sum();
            res = res.max((v - model).norm());
        }
    }
    res
}

fn solve_least_squares(
    blocks: &[Block],
    dim: usize,
    max_degree: usize,
    labels: &[(usize, usize)],
) -> Result<(Vec<Complex64>, f64)> {
    let rows: usize = blocks.iter().map(|b| b.profile.radii.len()).sum();
    let mut a = DMatrix::zeros(rows, labels.len());
    let mut values = Vec::with_capacity(rows);
    let mut off = 0;
    for b in blocks {
        let terms: Vec<PairTerm> = b.terms.iter().map(|t| t.1).collect();
        let local = design(dim, max_degree, &b.profile.radii, &terms);
        for (k, (u, _)) in b.terms.iter().enumerate() {
            for i in 0..local.nrows() {
                a[(off + i, *u)] += local[(i, k)];
            }
        }
        values.extend_from_slice(&b.profile.values);
        off += local.nrows();
    }
    let sol = lstsq(&a, &rhs(&values), labels)?;
    Ok((to_complex(&sol.x), sol.condition))
}

/// Taylor matching: fit each profile by Σ_k t_k (r/2)^{q+2k} on the
/// nodes with r ≤ r_fit, then solve the triangular system linking t to
/// the pair coefficients through the product series. The fit radius and
/// the number of matched orders are chosen by forward residual.
fn solve_taylor(
    blocks: &[Block],
    dim: usize,
    max_degree: usize,
    labels: &[(usize, usize)],
) -> Result<(Vec<Complex64>, f64)> {
    let alpha = (dim as f64 - 2.0) / 2.0;
    let two_alpha = (dim as i32) - 2;
    let rmax = blocks.iter().flat_map(|b| b.profile.radii.iter().copied()).fold(0.0, f64::max);
    let mut best: Option<(f64, Vec<Complex64>, f64)> = None;
    let mut last_err = None;
    for frac in [0.25, 0.33, 0.45, 0.6, 0.7, 0.8, 0.9, 1.0] {
        let r_fit = frac * rmax;
        for margin in 0..=16 {
            let mut stacked_c: Vec<Vec<f64>> = Vec::new();
            let mut stacked_t: Vec<Complex64> = Vec::new();
            let mut ok = true;
            let mut cond = 1.0f64;
            for b in blocks {
                let q = b.profile.frequency;
                let order = b.terms.iter().map(|(_, t)| (t.m + t.n - q) / 2).max().unwrap_or(0) + 1;
                let count = (order + margin).max(1);
                let idx: Vec<usize> = (0..b.profile.radii.len()).filter(|&i| b.profile.radii[i] <= r_fit * (1.0 + 1e-12)).collect();
                if idx.len() < count + 2 {
                    ok = false;
                    break;
                }
                let scale = r_fit / 2.0;
                // fit in a shifted Chebyshev basis of u = (x/scale)², then
                // expand into powers of u
                let cheb = shifted_chebyshev(count);
                let v = DMatrix::from_fn(idx.len(), count, |i, j| {
                    let x = b.profile.radii[idx[i]] / 2.0 / scale;
                    let u = x * x;
                    x.powi(q as i32) * cheb[j].iter().rev().fold(0.0, |acc, &a| acc * u + a)
                });
                let y: Vec<Complex64> = idx.iter().map(|&i| b.profile.values[i]).collect();
                let fit_labels = vec![(q, q); count];
                let t = match lstsq(&v, &rhs(&y), &fit_labels) {
                    Ok(s) => s,
                    Err(_) => {
                        ok = false;
                        break;
                    }
                };
                cond = cond.max(t.condition);
                // t_k here multiplies (x/scale)^{q+2k}; row k of the
                // coupling system is scaled alike
                let coef = to_complex(&t.x);
                let t: Vec<Complex64> =
                    (0..count).map(|k| (0..count).map(|j| coef[j] * cheb[j][k]).sum()).collect();
                for k in 0..count {
                    let mut row = vec![0.0; labels.len()];
                    for (u, term) in &b.terms {
                        let shift = (term.m + term.n - q) / 2;
                        if k >= shift {
                            let c = bessel_product_coefficients(term.m, term.n, alpha, k - shift + 1)?;
                            let factor = 2.0 * PI * weight(term) * term.coupling * 2f64.powi(-two_alpha);
                            row[*u] += factor * c[k - shift] * scale.powi((q + 2 * k) as i32);
                        }
                    }
                    stacked_c.push(row);
                    stacked_t.push(t[k]);
                }
            }
            if !ok {
                continue;
            }
            let c = DMatrix::from_fn(stacked_c.len(), labels.len(), |i, j| stacked_c[i][j]);
            match lstsq(&c, &rhs(&stacked_t), labels) {
                Ok(sol) => {
                    let gamma = to_complex(&sol.x);
                    let res = forward_residual(blocks, dim, max_degree, &gamma);
                    if best.as_ref().is_none_or(|b| res < b.0) {
                        best = Some((res, gamma, cond.max(sol.condition)));
                    }
                }
                Err(e) => last_err = Some(e),
            }
        }
    }
    match best {
        Some((_, gamma, cond)) => Ok((gamma, cond)),
        None => Err(last_err.unwrap_or(Error::RankDeficient { pairs: labels.to_vec() })),
    }
}

pub(crate) fn solve_blocks(
    blocks: &[Block],
    labels: &[(usize, usize)],
    dim: usize,
    max_degree: usize,
    method: UnmixMethod,
) -> Result<UnmixReport> {
    let (gamma, condition) = if labels.is_empty() {
        (Vec::new(), 1.0)
    } else {
        match method {
            UnmixMethod::LeastSquares => solve_least_squares(blocks, dim, max_degree, labels)?,
            UnmixMethod::Taylor => solve_taylor(blocks, dim, max_degree, labels)?,
        }
    };
    let residual = forward_residual(blocks, dim, max_degree, &gamma);
    let warning = (condition > CONDITION_WARNING)
        .then(|| format!("ill-conditioned radial design: condition estimate {condition:.3e}"));
    Ok(UnmixReport {
        frequencies: blocks.iter().map(|b| b.profile.frequency).collect(),
        pairs: labels.to_vec(),
        coefficients: gamma,
        residual,
        condition,
        warning,
    })
}

/// Recover the pair coefficients carried by one profile: g_q(r) ≈
/// Σ γ_{m,n} 2π w L R_m(r) R_n(r) over the compatible pairs, w = 2 off
/// the diagonal.
pub fn radial_unmix(profile: &RadialProfile, max_degree: usize, method: UnmixMethod) -> Result<UnmixReport> {
    if profile.radii.windows(2).any(|w| w[1] <= w[0]) || profile.radii.first().is_some_and(|&r| r <= 0.0) {
        return Err(Error::Domain("radial nodes must be positive and strictly increasing".into()));
    }
    let terms = compatible_pairs(profile.dim, profile.frequency, max_degree);
    let labels: Vec<(usize, usize)> = terms.iter().map(|t| (t.m, t.n)).collect();
    let block = Block { profile, terms: terms.into_iter().enumerate().collect() };
    solve_blocks(&[block], &labels, profile.dim, max_degree, method)
}
