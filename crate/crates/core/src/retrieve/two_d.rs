use num_complex::Complex64;

use super::pair::{mode_data, solve_pair};
use super::{finish, planar_from_gram, Branch, RetrievalResult, RetrieveOptions, ACTIVE, ROUNDOFF};
use crate::error::{Error, Result};
use crate::field::{magnitude_coeffs, HerglotzField, MagnitudeData};

/// Relative anchor asymmetry below which a mode counts as type R.
const ASYMMETRY: f64 = 1e-6;

fn high(data: &MagnitudeData, m: usize, n: usize) -> Complex64 {
    data.spectrum(m, n).expect("spectra").high
}

fn low(data: &MagnitudeData, m: usize, n: usize) -> Complex64 {
    data.spectrum(m, n).expect("spectra").low
}

/// |û(m)|² + |û(−m)|² per degree (m = 0: |û(0)|²).
fn powers(data: &MagnitudeData) -> Vec<f64> {
    (0..=data.max_degree).map(|m| if m == 0 { high(data, 0, 0).re } else { low(data, m, m).re }).collect()
}

fn field_from(big_m: usize, uhat: &[Complex64], uneg: &[Complex64]) -> HerglotzField {
    HerglotzField::from_fourier(big_m, |k| if k >= 0 { uhat[k as usize] } else { uneg[(-k) as usize] })
}

pub fn retrieve_2d(data: &MagnitudeData, opts: &RetrieveOptions) -> Result<RetrievalResult> {
    if data.dim != 2 || data.spectra.is_none() {
        return Err(Error::Mismatch("two-dimensional retrieval needs d = 2 spectra".into()));
    }
    let pw = powers(data);
    let total: f64 = pw.iter().map(|p| p.max(0.0)).sum();
    let mean_active = total > 0.0 && pw[0] > ACTIVE * total;
    let branch = match opts.branch {
        Branch::Auto if mean_active => Branch::Mean,
        Branch::Auto => Branch::Auto,
        Branch::Mean if !mean_active => {
            return Err(Error::BranchNotApplicable("the mean vanishes; use the zero-mean (auto) branch".into()))
        }
        Branch::Sparse => return Err(Error::BranchNotApplicable("sparse retrieval is a d ≥ 3 solver".into())),
        b => b,
    };
    let u = match branch {
        _ if total <= 0.0 => HerglotzField::zeros(HerglotzField::fourier_basis(data.max_degree), data.max_degree)?,
        Branch::Mean => mean_branch(data)?,
        Branch::Real => real_field_2d(data),
        _ => zero_mean_branch(data, opts.tol)?,
    };
    finish(u, data, branch, opts)
}

/// û(0) gauged real positive; the real-valued part p (p̂(n) =
/// (û(n) + conj û(−n))/2) is linear in Re c_{0,n}, and what remains is
/// i·w with w real, whose data are data(u) − data(p).
fn mean_branch(data: &MagnitudeData) -> Result<HerglotzField> {
    let big_m = data.max_degree;
    let rho = high(data, 0, 0).re.sqrt();
    let mut pos = vec![Complex64::new(rho, 0.0)];
    pos.extend((1..=big_m).map(|n| high(data, 0, n) / rho));
    let neg: Vec<Complex64> = pos.iter().map(|c| c.conj()).collect();
    let p = field_from(big_m, &pos, &neg);
    let rest = data.difference(&magnitude_coeffs(&p, None))?;
    if rest.scale() <= ROUNDOFF * data.scale() {
        return Ok(p);
    }
    let w = real_field_2d(&rest);
    let i = Complex64::new(0.0, 1.0);
    Ok(p.add(&w.scaled(i))?)
}

/// A real-valued field (ŵ(−n) = conj ŵ(n)) up to sign: ŵ(m₁)² =
/// f̂_{m₁,m₁}(2m₁) at the strongest degree, then ŵ(n) = f̂_{m₁,n}/ŵ(m₁).
pub(crate) fn real_field_2d(data: &MagnitudeData) -> HerglotzField {
    let big_m = data.max_degree;
    let sq: Vec<f64> = (0..=big_m).map(|m| if m == 0 { high(data, 0, 0).re } else { low(data, m, m).re / 2.0 }).collect();
    let top = sq.iter().copied().fold(0.0, f64::max);
    let zero = Complex64::new(0.0, 0.0);
    let mut w = vec![zero; big_m + 1];
    if top > 0.0 {
        let m1 = sq.iter().position(|&v| v == top).unwrap();
        let pivot = if m1 == 0 { Complex64::new(high(data, 0, 0).re.max(0.0).sqrt(), 0.0) } else { high(data, m1, m1).sqrt() };
        for n in 0..=big_m {
            if sq[n] <= ACTIVE * top {
                continue;
            }
            w[n] = if n == m1 { pivot } else { high(data, n.min(m1), n.max(m1)) / pivot };
        }
        w[0].im = 0.0;
    }
    let neg: Vec<Complex64> = w.iter().map(|c| c.conj()).collect();
    field_from(big_m, &w, &neg)
}

/// û(0) = 0. Anchor route: at the most asymmetric mode m₀ fix
/// (û(m₀), û(−m₀)) = (ρ₁, conj(p)/ρ₁); every other mode then solves a
/// 2×2 system from Re c_{m₀,n}. All-R route: û(±m) = β_m e^{±iθ_m} with
/// θ_m from p_m and Re(β_m β̄_n) from the cross spectra. The better
/// forward fit wins.
fn zero_mean_branch(data: &MagnitudeData, tol: f64) -> Result<HerglotzField> {
    let big_m = data.max_degree;
    let pw = powers(data);
    let total: f64 = pw.iter().map(|p| p.max(0.0)).sum();
    let active: Vec<usize> = (1..=big_m).filter(|&m| pw[m] > ACTIVE * total).collect();
    let mut sols = vec![None; big_m + 1];
    for &m in &active {
        let (s, p) = mode_data(data, m);
        sols[m] = Some(solve_pair(s, p, tol * total.max(1e-300))?);
    }
    let mut candidates = Vec::new();
    let anchor = active
        .iter()
        .copied()
        .max_by(|&x, &y| sols[x].unwrap().asymmetry().total_cmp(&sols[y].unwrap().asymmetry()));
    if let Some(m0) = anchor.filter(|&m| sols[m].unwrap().asymmetry() > ASYMMETRY) {
        candidates.push(anchor_route(data, &active, m0, sols[m0].unwrap().candidates(0.0)[0]));
    }
    if !active.is_empty() {
        candidates.push(all_r_route(data, &active));
    }
    if candidates.is_empty() {
        return HerglotzField::zeros(HerglotzField::fourier_basis(big_m), big_m);
    }
    let scored: Vec<(f64, HerglotzField)> = candidates
        .into_iter()
        .map(|u| (magnitude_coeffs(&u, None).deviation(data).unwrap_or(f64::INFINITY), u))
        .collect();
    Ok(scored.into_iter().min_by(|a, b| a.0.total_cmp(&b.0)).unwrap().1)
}

fn anchor_route(data: &MagnitudeData, active: &[usize], m0: usize, (a, b): (Complex64, Complex64)) -> HerglotzField {
    let big_m = data.max_degree;
    let zero = Complex64::new(0.0, 0.0);
    let (mut pos, mut neg) = (vec![zero; big_m + 1], vec![zero; big_m + 1]);
    pos[m0] = a;
    neg[m0] = b;
    let det = b.norm_sqr() - a.norm_sqr();
    for &n in active.iter().filter(|&&n| n != m0) {
        let (c, d_conj) = if n > m0 {
            let (h2, l2) = (2.0 * high(data, m0, n), 2.0 * low(data, m0, n));
            ((b * h2 - a * l2) / det, (b.conj() * l2 - a.conj() * h2) / det)
        } else {
            let (h2, l2) = (2.0 * high(data, n, m0), 2.0 * low(data, n, m0).conj());
            ((b * h2 - a * l2) / det, (b.conj() * l2 - a.conj() * h2) / det)
        };
        pos[n] = c;
        neg[n] = d_conj.conj();
    }
    field_from(big_m, &pos, &neg)
}

fn all_r_route(data: &MagnitudeData, active: &[usize]) -> HerglotzField {
    let big_m = data.max_degree;
    let theta: Vec<f64> = (0..=big_m).map(|m| if m == 0 { 0.0 } else { high(data, m, m).arg() / 2.0 }).collect();
    let k = active.len();
    let mut g = vec![vec![0.0; k]; k];
    for (i, &m) in active.iter().enumerate() {
        g[i][i] = high(data, m, m).norm();
        for (j, &n) in active.iter().enumerate().skip(i + 1) {
            let from_high = (high(data, m, n) * Complex64::from_polar(1.0, -(theta[m] + theta[n]))).re;
            let from_low = (low(data, m, n) * Complex64::from_polar(1.0, -(theta[n] - theta[m]))).re;
            g[i][j] = (from_high + from_low) / 2.0;
            g[j][i] = g[i][j];
        }
    }
    let beta = planar_from_gram(&g);
    let zero = Complex64::new(0.0, 0.0);
    let (mut pos, mut neg) = (vec![zero; big_m + 1], vec![zero; big_m + 1]);
    for (i, &m) in active.iter().enumerate() {
        pos[m] = beta[i] * Complex64::from_polar(1.0, theta[m]);
        neg[m] = beta[i] * Complex64::from_polar(1.0, -theta[m]);
    }
    field_from(big_m, &pos, &neg)
}
