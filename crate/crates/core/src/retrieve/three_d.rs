use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::two_d::real_field_2d;
use super::{finish, planar_from_gram, Branch, RetrievalResult, RetrieveOptions, ACTIVE, ROUNDOFF};
use crate::error::{Error, Result};
use crate::field::{chebyshev_radii, data_grid, equal_magnitude, magnitude_coeffs, radial_factors, HerglotzField, MagnitudeData};
use crate::harmonics::{Basis, SphereGrid};

/// Sampled data and the basis evaluated on its grid.
struct Setting<'a> {
    data: &'a MagnitudeData,
    grid: &'a SphereGrid,
    /// y[m][k][i]: k-th degree-m function at node i.
    y: Vec<Vec<Vec<f64>>>,
}

impl<'a> Setting<'a> {
    fn new(data: &'a MagnitudeData, basis: &Basis) -> Result<Self> {
        let grid = &data.samples.as_ref().ok_or_else(|| Error::Mismatch("sampled magnitude data required".into()))?.grid;
        if !basis.is_real() || basis.dim() != data.dim {
            return Err(Error::Mismatch("a real basis of the data's dimension is required".into()));
        }
        if basis.max_degree() < data.max_degree {
            return Err(Error::Mismatch(format!("basis prepared to degree {}, data reach {}", basis.max_degree(), data.max_degree)));
        }
        let y = (0..=data.max_degree)
            .map(|m| {
                let mut per: Vec<Vec<f64>> = vec![Vec::with_capacity(grid.len()); basis.count(m)];
                for x in grid.nodes() {
                    for (k, v) in basis.eval_real(m, x).expect("degree within basis").into_iter().enumerate() {
                        per[k].push(v);
                    }
                }
                per
            })
            .collect();
        Ok(Setting { data, grid, y })
    }

    fn c(&self, m: usize, n: usize) -> &[f64] {
        self.data.sample(m, n).expect("pair within data")
    }

    fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).zip(self.grid.weights()).map(|((x, y), w)| x * y * w).sum()
    }

    fn mean(&self, a: &[f64]) -> f64 {
        self.dot(a, &vec![1.0; a.len()]) / self.grid.weights().iter().sum::<f64>()
    }

    fn powers(&self) -> Vec<f64> {
        (0..=self.data.max_degree).map(|m| self.mean(self.c(m, m))).collect()
    }

    /// Weighted least squares Σ_k x_k cols[k](θ_i) ≈ b(θ_i).
    fn fit(&self, cols: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
        let sw: Vec<f64> = self.grid.weights().iter().map(|w| w.sqrt()).collect();
        let a = DMatrix::from_fn(b.len(), cols.len(), |i, k| cols[k][i] * sw[i]);
        let rhs = DVector::from_iterator(b.len(), b.iter().zip(&sw).map(|(v, s)| v * s));
        let svd = a.svd(true, true);
        let cut = 1e-12 * svd.singular_values.max();
        svd.solve(&rhs, cut).expect("SVD factors computed").iter().copied().collect()
    }
}

fn field_from_real(basis: &Arc<Basis>, coeffs: Vec<Vec<Complex64>>) -> Result<HerglotzField> {
    HerglotzField::new(basis.clone(), coeffs)
}

/// A real field (real coefficients in a real basis) from its data, up to
/// sign. At the strongest degree m₁, F² = Σ W_jk Y_j Y_k is solved for W
/// by least squares and W is reduced to a rank-one x xᵀ (top eigenvector,
/// then alternating projection if needed); other degrees follow linearly
/// from F_{m₁} F_n = Re c_{m₁,n}.
fn real_coefficients(s: &Setting) -> Vec<Vec<f64>> {
    let big_m = s.data.max_degree;
    let pw = s.powers();
    let top = pw.iter().copied().fold(0.0, f64::max);
    let mut out: Vec<Vec<f64>> = (0..=big_m).map(|m| vec![0.0; s.y[m].len()]).collect();
    if top <= 0.0 {
        return out;
    }
    let m1 = pw.iter().position(|&v| v == top).unwrap();
    let y = &s.y[m1];
    let n = y.len();
    let mut idx = Vec::new();
    for j in 0..n {
        for k in j..n {
            idx.push((j, k));
        }
    }
    let cols: Vec<Vec<f64>> = idx
        .iter()
        .map(|&(j, k)| {
            let f = if j == k { 1.0 } else { 2.0 };
            y[j].iter().zip(&y[k]).map(|(a, b)| f * a * b).collect()
        })
        .collect();
    let target = s.c(m1, m1);
    let unpack = |v: &[f64]| {
        let mut w = DMatrix::zeros(n, n);
        for (t, &(j, k)) in idx.iter().enumerate() {
            w[(j, k)] = v[t];
            w[(k, j)] = v[t];
        }
        w
    };
    let rank_one = |w: DMatrix<f64>| -> DVector<f64> {
        let eig = SymmetricEigen::new(w);
        let (i, &lam) = eig.eigenvalues.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
        let mut v = eig.eigenvectors.column(i).into_owned() * lam.max(0.0).sqrt();
        // deterministic sign: largest entry positive
        let (imax, _) = v.iter().enumerate().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).unwrap();
        if v[imax] < 0.0 {
            v = -v;
        }
        v
    };
    let misfit = |x: &DVector<f64>| -> f64 {
        let f: Vec<f64> = (0..target.len()).map(|i| (0..n).map(|j| x[j] * y[j][i]).sum()).collect();
        f.iter().zip(target).map(|(a, b)| (a * a - b).abs()).fold(0.0, f64::max)
    };
    let scale = target.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut vecw = s.fit(&cols, target);
    let mut x = rank_one(unpack(&vecw));
    let mut best = (misfit(&x), x.clone());
    for _ in 0..500 {
        if best.0 <= 1e-12 * scale {
            break;
        }
        // project x xᵀ back onto the data-consistent affine set
        let packed: Vec<f64> = idx.iter().map(|&(j, k)| x[j] * x[k]).collect();
        let model: Vec<f64> = (0..target.len()).map(|i| cols.iter().zip(&packed).map(|(c, p)| c[i] * p).sum()).collect();
        let resid: Vec<f64> = target.iter().zip(&model).map(|(t, m)| t - m).collect();
        let corr = s.fit(&cols, &resid);
        vecw = packed.iter().zip(&corr).map(|(p, c)| p + c).collect();
        x = rank_one(unpack(&vecw));
        let mf = misfit(&x);
        if mf < best.0 {
            best = (mf, x.clone());
        }
    }
    let x = best.1;
    out[m1] = x.iter().copied().collect();
    let f1: Vec<f64> = (0..target.len()).map(|i| (0..n).map(|j| x[j] * y[j][i]).sum()).collect();
    for m in 0..=big_m {
        if m == m1 || pw[m] <= ACTIVE * top {
            continue;
        }
        let cols: Vec<Vec<f64>> = s.y[m].iter().map(|yk| yk.iter().zip(&f1).map(|(a, b)| a * b).collect()).collect();
        out[m] = s.fit(&cols, s.c(m.min(m1), m.max(m1)));
    }
    out
}

fn complexify(v: Vec<Vec<f64>>) -> Vec<Vec<Complex64>> {
    v.into_iter().map(|a| a.into_iter().map(|x| Complex64::new(x, 0.0)).collect()).collect()
}

/// Real-valued field from magnitude data, up to sign.
pub fn retrieve_real_field(data: &MagnitudeData, basis: Option<&Arc<Basis>>, opts: &RetrieveOptions) -> Result<RetrievalResult> {
    if data.dim == 2 {
        let u = real_field_2d(data);
        return finish(u, data, Branch::Real, opts);
    }
    let basis = basis.ok_or_else(|| Error::Mismatch("retrieval for d ≥ 3 needs a basis".into()))?;
    let s = Setting::new(data, basis)?;
    let u = field_from_real(basis, complexify(real_coefficients(&s)))?;
    finish(u, data, Branch::Real, opts)
}

/// Nonvanishing mean: a_{0,1} gauged real positive, Re F_n =
/// Re c_{0,n}/(a_{0,1} Y_0) projected onto degree n gives the real parts;
/// the imaginary parts form a real field whose data are
/// data(u) − data(Re u), recovered up to sign.
pub fn retrieve_3d_mean(data: &MagnitudeData, basis: &Arc<Basis>, opts: &RetrieveOptions) -> Result<RetrievalResult> {
    let s = Setting::new(data, basis)?;
    let pw = s.powers();
    let total: f64 = pw.iter().sum();
    if !(total > 0.0 && pw[0] > ACTIVE * total) {
        return Err(Error::BranchNotApplicable("the mean vanishes; the mean branch does not apply".into()));
    }
    let y0 = s.y[0][0][0];
    let rho = pw[0].sqrt() / y0.abs();
    let mut re: Vec<Vec<f64>> = vec![vec![rho]];
    for n in 1..=data.max_degree {
        let target: Vec<f64> = s.c(0, n).iter().map(|v| v / (rho * y0)).collect();
        re.push(s.fit(&s.y[n], &target));
    }
    let p = field_from_real(basis, complexify(re))?;
    let rest = data.difference(&magnitude_coeffs(&p, Some(s.grid)))?;
    if rest.scale() <= ROUNDOFF * data.scale() {
        return finish(p, data, Branch::Mean, opts);
    }
    let w = real_coefficients(&Setting::new(&rest, basis)?);
    let i = Complex64::new(0.0, 1.0);
    let u = p.add(&field_from_real(basis, complexify(w))?.scaled(i))?;
    finish(u, data, Branch::Mean, opts)
}

/// Sparse fields: the support index j(m) is the basis square best
/// matching Re c_{m,m}; the cross fits give Re(a_m ā_n), a planar Gram
/// matrix resolved up to rotation and reflection.
pub fn retrieve_3d_sparse(data: &MagnitudeData, basis: &Arc<Basis>, opts: &RetrieveOptions) -> Result<RetrievalResult> {
    let s = Setting::new(data, basis)?;
    let big_m = data.max_degree;
    let pw = s.powers();
    let total: f64 = pw.iter().sum();
    let scale = data.scale();
    let mut support = Vec::new();
    for m in 0..=big_m {
        if !(pw[m] > ACTIVE * total) {
            continue;
        }
        let c = s.c(m, m);
        let mut best: Option<(f64, usize, f64)> = None;
        for (j, yj) in s.y[m].iter().enumerate() {
            let sq: Vec<f64> = yj.iter().map(|v| v * v).collect();
            let lam = (s.dot(c, &sq) / s.dot(&sq, &sq)).max(0.0);
            let res = c.iter().zip(&sq).map(|(a, b)| (a - lam * b).abs()).fold(0.0, f64::max);
            if best.is_none_or(|b| res < b.0) {
                best = Some((res, j, lam));
            }
        }
        let (res, j, lam) = best.expect("nonempty degree");
        if res > opts.tol * scale {
            return Err(Error::NotSparse { degree: m, residual: res });
        }
        support.push((m, j, lam));
    }
    let k = support.len();
    let mut g = vec![vec![0.0; k]; k];
    for a in 0..k {
        g[a][a] = support[a].2;
        for b in a + 1..k {
            let ((m, j, _), (n, l, _)) = (support[a], support[b]);
            let prod: Vec<f64> = s.y[m][j].iter().zip(&s.y[n][l]).map(|(x, y)| x * y).collect();
            g[a][b] = s.dot(s.c(m, n), &prod) / s.dot(&prod, &prod);
            g[b][a] = g[a][b];
        }
    }
    let z = planar_from_gram(&g);
    let mut coeffs: Vec<Vec<Complex64>> = (0..=big_m).map(|m| vec![Complex64::new(0.0, 0.0); basis.count(m)]).collect();
    for (t, &(m, j, _)) in support.iter().enumerate() {
        coeffs[m][j] = z[t];
    }
    finish(field_from_real(basis, coeffs)?, data, Branch::Sparse, opts)
}

/// Sign relating two real fields of equal magnitude: +1 for v = u, −1
/// for v = −u, decided on a polar grid where |u| exceeds tol·max |u|
/// and required to be unanimous.
pub fn retrieve_3d_real(u: &HerglotzField, v: &HerglotzField, tol: f64) -> Result<i8> {
    let is_real = |f: &HerglotzField| f.spec().is_real() && f.flat().iter().all(|c| c.im.abs() <= 1e-12 * f.max_abs().max(1.0));
    if !is_real(u) || !is_real(v) {
        return Err(Error::NotRealPair("both fields must have real coefficients in a real basis".into()));
    }
    if u.dim() != v.dim() {
        return Err(Error::NotRealPair(format!("dimension {} vs {}", u.dim(), v.dim())));
    }
    if !equal_magnitude(u, v, 1e-9 * u.max_abs().max(v.max_abs()).max(1.0).powi(2)) {
        return Err(Error::NotRealPair("the fields differ in magnitude".into()));
    }
    let big_m = u.max_degree().max(v.max_degree());
    let grid = data_grid(u.dim(), big_m.max(1))?;
    let mut vals = Vec::new();
    for r in chebyshev_radii(2 * big_m + 4, (big_m as f64 + 2.0).max(1.0)) {
        let ru = radial_factors(u.dim(), u.max_degree(), r);
        let rv = radial_factors(v.dim(), v.max_degree(), r);
        for x in grid.nodes() {
            vals.push((u.eval_with(&ru, x).re, v.eval_with(&rv, x).re));
        }
    }
    let top = vals.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(1);
    }
    let (mut agree, mut disagree) = (0usize, 0usize);
    for &(a, b) in vals.iter().filter(|p| p.0.abs() > tol * top) {
        if (a - b).abs() <= (a + b).abs() {
            agree += 1;
        } else {
            disagree += 1;
        }
    }
    match (agree, disagree) {
        (_, 0) => Ok(1),
        (0, _) => Ok(-1),
        _ => Err(Error::NotRealPair(format!("{agree} nodes agree in sign and {disagree} disagree"))),
    }
}
