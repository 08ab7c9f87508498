use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::field::MagnitudeGrid;
use crate::specfun::gegenbauer;

/// One angular component of |u|² as a function of r: the coefficient of
/// e^{iqφ} (d = 2) or of the Legendre polynomial P_q(⟨θ, e_3⟩) (d = 3,
/// zonal data; stored with zero imaginary part).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub dim: usize,
    pub frequency: usize,
    pub radii: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl RadialProfile {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn legendre(q: usize, t: f64) -> f64 {
    gegenbauer(q, 0.5, t)
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Split gridded |u|² into radial profiles, one per angular frequency
/// (d = 2, every frequency below the Nyquist limit) or Legendre degree
/// (d = 3, up to the number of polar nodes minus one).
pub fn angular_decompose(samples: &MagnitudeGrid) -> Result<Vec<RadialProfile>> {
    match samples.dim {
        2 => fourier_profiles(samples),
        3 => legendre_profiles(samples),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

fn fourier_profiles(g: &MagnitudeGrid) -> Result<Vec<RadialProfile>> {
    let n = g.angles.len();
    let phi0 = g.angles[0][0];
    for (k, a) in g.angles.iter().enumerate() {
        if wrap(a[0] - phi0 - 2.0 * PI * k as f64 / n as f64).abs() > 1e-9 {
            return Err(Error::NonUniformGrid(format!("angle {k} is {} but a uniform grid needs {}", a[0], wrap(phi0 + 2.0 * PI * k as f64 / n as f64))));
        }
    }
    let fft = FftPlanner::new().plan_fft_forward(n);
    let top = (n - 1) / 2;
    let mut out: Vec<RadialProfile> = (0..=top)
        .map(|q| RadialProfile { dim: 2, frequency: q, radii: g.radii.clone(), values: Vec::with_capacity(g.radii.len()) })
        .collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..g.radii.len() {
        for (b, &v) in buf.iter_mut().zip(g.ring(i)) {
            *b = Complex64::new(v, 0.0);
        }
        fft.process(&mut buf);
        for (q, p) in out.iter_mut().enumerate() {
            let shift = Complex64::from_polar(1.0 / n as f64, -(q as f64) * phi0);
            p.values.push(buf[q] * shift);
        }
    }
    Ok(out)
}

fn legendre_profiles(g: &MagnitudeGrid) -> Result<Vec<RadialProfile>> {
    // group nodes by polar angle
    let mut polar: Vec<f64> = Vec::new();
    let mut member: Vec<usize> = Vec::with_capacity(g.angles.len());
    for a in &g.angles {
        let idx = match polar.iter().position(|&p| (p - a[0]).abs() < 1e-12) {
            Some(i) => i,
            None => {
                polar.push(a[0]);
                polar.len() - 1
            }
        };
        member.push(idx);
    }
    let nt = polar.len();
    let rule = GaussLegendre::new(NonZeroUsize::new(nt).expect("nonempty grid"));
    let mut gl: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
    gl.sort_by(|a, b| a.0.total_cmp(&b.0));
    let t: Vec<f64> = polar.iter().map(|p| p.cos()).collect();
    let weight: Vec<f64> = t
        .iter()
        .map(|&tj| {
            gl.iter()
                .find(|(x, _)| (x - tj).abs() < 1e-10)
                .map(|&(_, w)| w)
                .ok_or_else(|| Error::NonUniformGrid(format!("polar node cos θ = {tj} is not a Gauss–Legendre node of order {nt}")))
        })
        .collect::<Result<_>>()?;

    let scale = g.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut deviation = 0.0f64;
    let mut ring_means = vec![vec![0.0; nt]; g.radii.len()];
    for (i, means) in ring_means.iter_mut().enumerate() {
        let ring = g.ring(i);
        let mut lo = vec![f64::INFINITY; nt];
        let mut hi = vec![f64::NEG_INFINITY; nt];
        let mut count = vec![0usize; nt];
        for (&j, &v) in member.iter().zip(ring) {
            means[j] += v;
            count[j] += 1;
            lo[j] = lo[j].min(v);
            hi[j] = hi[j].max(v);
        }
        for j in 0..nt {
            means[j] /= count[j] as f64;
            deviation = deviation.max(hi[j] - lo[j]);
        }
    }
    if deviation > 1e-9 * scale.max(1e-300) && deviation > 0.0 {
        return Err(Error::NotZonal { deviation });
    }
    Ok((0..nt)
        .map(|q| {
            let pq: Vec<f64> = t.iter().map(|&tj| legendre(q, tj)).collect();
            let values = ring_means
                .iter()
                .map(|f| {
                    let s: f64 = (0..nt).map(|j| weight[j] * f[j] * pq[j]).sum();
                    Complex64::new((2 * q + 1) as f64 / 2.0 * s, 0.0)
                })
                .collect();
            RadialProfile { dim: 3, frequency: q, radii: g.radii.clone(), values }
        })
        .collect())
}
