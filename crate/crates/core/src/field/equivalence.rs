use num_complex::Complex64;

use super::HerglotzField;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// v = c·u
    Identity,
    /// v = c·ū
    Conjugate,
    /// both relations hold
    Both,
    Inequivalent,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Identity => "Identity",
            Verdict::Conjugate => "Conjugate",
            Verdict::Both => "Both",
            Verdict::Inequivalent => "Inequivalent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrivialEquivalence {
    pub verdict: Verdict,
    /// Unimodular constant of the reported relation (the Identity one for
    /// `Both`); `None` when inequivalent.
    pub c: Option<Complex64>,
    /// Constant for the conjugate relation, when it holds.
    pub c_conjugate: Option<Complex64>,
    /// Max coefficient deviation of the best relation.
    pub residual: f64,
}

/// Best unimodular c for y ≈ c·x, and the max deviation it leaves.
fn fit(x: &[Complex64], y: &[Complex64]) -> (Complex64, f64) {
    let ip: Complex64 = x.iter().zip(y).map(|(a, b)| a.conj() * b).sum();
    let c = if ip.norm() > 0.0 { ip / ip.norm() } else { Complex64::new(1.0, 0.0) };
    let res = x.iter().zip(y).map(|(a, b)| (b - c * a).norm()).fold(0.0, f64::max);
    (c, res)
}

/// Decide whether v = c·u or v = c·ū for a unimodular c. Deviations are
/// measured coefficientwise against `tol · max(1, max |coefficient|)`.
pub fn trivially_equivalent(u: &HerglotzField, v: &HerglotzField, tol: f64) -> Result<TrivialEquivalence> {
    if u.spec() != v.spec() {
        return Err(Error::Mismatch("trivial equivalence needs both fields in the same basis".into()));
    }
    let top = u.max_degree().max(v.max_degree());
    let (u, v) = (u.padded(top)?, v.padded(top)?);
    let (x, xc, y) = (u.flat(), u.conjugate().flat(), v.flat());
    let one = Complex64::new(1.0, 0.0);
    if u.is_zero() && v.is_zero() {
        return Ok(TrivialEquivalence { verdict: Verdict::Both, c: Some(one), c_conjugate: Some(one), residual: 0.0 });
    }
    let bound = tol * u.max_abs().max(v.max_abs()).max(1.0);
    let (ci, ri) = fit(&x, &y);
    let (cc, rc) = fit(&xc, &y);
    let (id, cj) = (ri <= bound && !u.is_zero(), rc <= bound && !u.is_zero());
    Ok(match (id, cj) {
        (true, true) => TrivialEquivalence { verdict: Verdict::Both, c: Some(ci), c_conjugate: Some(cc), residual: ri.max(rc) },
        (true, false) => TrivialEquivalence { verdict: Verdict::Identity, c: Some(ci), c_conjugate: None, residual: ri },
        (false, true) => TrivialEquivalence { verdict: Verdict::Conjugate, c: Some(cc), c_conjugate: Some(cc), residual: rc },
        (false, false) => TrivialEquivalence { verdict: Verdict::Inequivalent, c: None, c_conjugate: None, residual: ri.min(rc) },
    })
}
