use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{HerglotzField, MagnitudeData};
use crate::harmonics::BasisKind;

/// Solutions (c, d) of |c|² + |d|² = s, c·d̄ = p: the moduli are the
/// square roots of the roots of x² − s·x + |p|² = 0, in either order,
/// and arg c − arg d = arg p with one free phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSolution {
    pub larger: f64,
    pub smaller: f64,
    /// p/|p|, absent when p = 0.
    pub phase: Option<Complex64>,
}

impl PairSolution {
    pub fn is_zero(&self) -> bool {
        self.larger == 0.0
    }

    /// (|larger| − |smaller|)/|larger|, 0 for the zero pair.
    pub fn asymmetry(&self) -> f64 {
        if self.larger == 0.0 {
            0.0
        } else {
            (self.larger - self.smaller) / self.larger
        }
    }

    /// The two solution branches at free phase φ: |c| = larger, then
    /// |c| = smaller. With p = 0 the second branch is (0, larger·e^{iφ}).
    pub fn candidates(&self, phi: f64) -> [(Complex64, Complex64); 2] {
        let e = Complex64::from_polar(1.0, phi);
        let zero = Complex64::new(0.0, 0.0);
        match self.phase {
            None => [(self.larger * e, zero), (zero, self.larger * e)],
            Some(w) => {
                let d_of = |c_mod: f64, other: f64| (c_mod * e, other * e * w.conj());
                [d_of(self.larger, self.smaller), d_of(self.smaller, self.larger)]
            }
        }
    }
}

pub fn solve_pair(s: f64, p: Complex64, tol: f64) -> Result<PairSolution> {
    let q = p.norm();
    if s < 2.0 * q - tol || s < -tol {
        return Err(Error::Inconsistent { residual: (2.0 * q - s).max(-s) });
    }
    let s = s.max(0.0);
    let disc = (s * s - 4.0 * q * q).max(0.0).sqrt();
    let big = (s + disc) / 2.0;
    // small root via the product to avoid cancellation
    let small = if big > 0.0 { q * q / big } else { 0.0 };
    let phase = (q > 0.0).then(|| p / q);
    Ok(PairSolution { larger: big.sqrt(), smaller: small.sqrt(), phase })
}

/// How a candidate's mode m relates to a reference's: type I when
/// (v̂(m), v̂(−m)) = κ(û(m), û(−m)), type C when it equals
/// κ(conj û(−m), conj û(m)), type R when |û(m)| = |û(−m)| ≠ 0 (then both
/// relations are attainable by other candidates).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeType {
    pub m: usize,
    pub identity: bool,
    pub conjugate: bool,
    pub real: bool,
    pub kappa: Option<Complex64>,
    pub kappa_conjugate: Option<Complex64>,
    /// For type R: û(m) = β e^{iθ}, û(−m) = β e^{−iθ}, θ ∈ [0, π).
    pub theta: Option<f64>,
}

impl ModeType {
    pub fn flags(&self) -> String {
        let mut s = String::new();
        for (on, c) in [(self.identity, 'I'), (self.conjugate, 'C'), (self.real, 'R')] {
            if on {
                s.push(c);
            }
        }
        if s.is_empty() {
            s.push('-');
        }
        s
    }
}

fn unimodular_fit(x: [Complex64; 2], y: [Complex64; 2]) -> (Complex64, f64) {
    let ip = x[0].conj() * y[0] + x[1].conj() * y[1];
    let k = if ip.norm() > 0.0 { ip / ip.norm() } else { Complex64::new(1.0, 0.0) };
    let res = (y[0] - k * x[0]).norm().max((y[1] - k * x[1]).norm());
    (k, res)
}

/// Mode table for the active modes m ≥ 1 of two d = 2 fields; deviations
/// are judged against `tol · max(1, max |coefficient|)`.
pub fn classify_modes(reference: &HerglotzField, candidate: &HerglotzField, tol: f64) -> Result<Vec<ModeType>> {
    if reference.spec().kind != BasisKind::Fourier2D || candidate.spec().kind != BasisKind::Fourier2D {
        return Err(Error::UnsupportedBasis { kind: "mode classification outside fourier2d", dim: reference.dim() });
    }
    let top = reference.max_degree().max(candidate.max_degree());
    let bound = tol * reference.max_abs().max(candidate.max_abs()).max(1.0);
    let mut out = Vec::new();
    for m in 1..=top {
        let k = m as i64;
        let (a, b) = (reference.fourier_coeff(k), reference.fourier_coeff(-k));
        let (c, d) = (candidate.fourier_coeff(k), candidate.fourier_coeff(-k));
        if a.norm().max(b.norm()) <= bound && c.norm().max(d.norm()) <= bound {
            continue;
        }
        let (ki, ri) = unimodular_fit([a, b], [c, d]);
        let (kc, rc) = unimodular_fit([b.conj(), a.conj()], [c, d]);
        let real = (a.norm() - b.norm()).abs() <= bound && a.norm() > bound;
        let theta = real.then(|| ((a * b.conj()).arg() / 2.0).rem_euclid(std::f64::consts::PI));
        out.push(ModeType {
            m,
            identity: ri <= bound,
            conjugate: rc <= bound,
            real,
            kappa: (ri <= bound).then_some(ki),
            kappa_conjugate: (rc <= bound).then_some(kc),
            theta,
        });
    }
    Ok(out)
}

/// Pair data (s_m, p_m) = (|û(m)|² + |û(−m)|², û(m)·conj û(−m)) read off
/// Re c_{m,m}.
pub(crate) fn mode_data(data: &MagnitudeData, m: usize) -> (f64, Complex64) {
    let sp = data.spectrum(m, m).expect("d = 2 spectra");
    (sp.low.re, sp.high)
}
