//! Phase retrieval: rebuilding a field, up to c·u / c·ū, from its
//! magnitude data. d = 2 is solved completely; for d ≥ 3 the real,
//! nonvanishing-mean and sparse cases are covered.

mod canon;
mod pair;
mod three_d;
mod two_d;

use num_complex::Complex64;

pub use canon::canonicalize;
pub use pair::{classify_modes, solve_pair, ModeType, PairSolution};
pub use three_d::{retrieve_3d_mean, retrieve_3d_real, retrieve_3d_sparse, retrieve_real_field};
pub use two_d::retrieve_2d;

use crate::error::{Error, Result};
use crate::field::{magnitude_coeffs, trivially_equivalent, HerglotzField, MagnitudeData, Verdict};
use crate::harmonics::BasisKind;

/// Relative power below which a degree is treated as absent.
pub const ACTIVE: f64 = 1e-10;
/// Default acceptance threshold on the relative forward residual.
/// Relative size below which the data left after removing Re u are
/// roundoff: Im u enters |u|² quadratically, so fitting it there would
/// turn ε into √ε noise.
pub(crate) const ROUNDOFF: f64 = 1e-13;

pub const ACCEPT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Auto,
    Mean,
    Real,
    Sparse,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Auto => "auto",
            Branch::Mean => "mean",
            Branch::Real => "real",
            Branch::Sparse => "sparse",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Branch::Auto, Branch::Mean, Branch::Real, Branch::Sparse].into_iter().find(|b| b.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetrieveOptions {
    pub branch: Branch,
    /// Acceptance threshold for the relative forward residual.
    pub tol: f64,
}

impl Default for RetrieveOptions {
    fn default() -> Self {
        RetrieveOptions { branch: Branch::Auto, tol: ACCEPT }
    }
}

/// The set of fields sharing the data: {c·u} ∪ {c·ū}, which may be one
/// class when ū is itself a unimodular multiple of u.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionClass {
    IdentityAndConjugate,
    Coincide,
}

impl SolutionClass {
    pub fn name(self) -> &'static str {
        match self {
            SolutionClass::IdentityAndConjugate => "identity+conjugate",
            SolutionClass::Coincide => "coincide",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RetrievalResult {
    /// Canonical representative.
    pub field: HerglotzField,
    pub class: SolutionClass,
    /// d = 2 only: mode table of the representative.
    pub modes: Vec<ModeType>,
    /// max deviation of the re-synthesized data, relative to the data scale.
    pub residual: f64,
    pub branch: Branch,
}

/// Complex numbers z_i, up to rotation and reflection of the plane, from
/// their real Gram matrix G_ij = Re(z_i z̄_j) (rank ≤ 2): the strongest
/// entry is gauged real positive, real parts follow from its row, and
/// imaginary parts from the row of the entry with the largest one.
pub(crate) fn planar_from_gram(g: &[Vec<f64>]) -> Vec<Complex64> {
    let k = g.len();
    let mut z = vec![Complex64::new(0.0, 0.0); k];
    let Some(p) = (0..k).max_by(|&a, &b| g[a][a].total_cmp(&g[b][b])) else {
        return z;
    };
    if g[p][p] <= 0.0 {
        return z;
    }
    let zp = g[p][p].sqrt();
    let re: Vec<f64> = (0..k).map(|i| if i == p { zp } else { g[p][i] / zp }).collect();
    let im2: Vec<f64> = (0..k).map(|i| (g[i][i] - re[i] * re[i]).max(0.0)).collect();
    let q = (0..k).max_by(|&a, &b| im2[a].total_cmp(&im2[b])).unwrap();
    let floor = 1e-12 * g[p][p];
    for i in 0..k {
        z[i].re = re[i];
    }
    if im2[q] > floor {
        let iq = im2[q].sqrt();
        for i in 0..k {
            z[i].im = if i == q { iq } else if i == p { 0.0 } else { (g[q][i] - re[q] * re[i]) / iq };
        }
    }
    z
}

/// Canonicalize, verify by forward synthesis and classify.
pub(crate) fn finish(u: HerglotzField, data: &MagnitudeData, branch: Branch, opts: &RetrieveOptions) -> Result<RetrievalResult> {
    let field = canonicalize(&u);
    let synth = match &data.samples {
        Some(s) if data.spectra.is_none() => magnitude_coeffs(&field, Some(&s.grid)),
        _ => magnitude_coeffs(&field, None),
    };
    let scale = data.scale();
    let residual = if scale > 0.0 { synth.deviation(data)? / scale } else { synth.scale() };
    if !(residual <= opts.tol) {
        return Err(Error::Inconsistent { residual });
    }
    let twin = trivially_equivalent(&field, &field.conjugate(), 1e-9)?;
    let class = match twin.verdict {
        Verdict::Identity | Verdict::Both => SolutionClass::Coincide,
        _ => SolutionClass::IdentityAndConjugate,
    };
    let modes = if field.spec().kind == BasisKind::Fourier2D { classify_modes(&field, &field, 1e-9)? } else { Vec::new() };
    Ok(RetrievalResult { field, class, modes, residual, branch })
}

/// Dispatch on dimension and branch: d = 2 → [`retrieve_2d`]; d ≥ 3 needs
/// a real basis, and `Auto` picks the mean branch when the mean is
/// present and the sparse branch otherwise.
pub fn retrieve(data: &MagnitudeData, basis: Option<&std::sync::Arc<crate::harmonics::Basis>>, opts: &RetrieveOptions) -> Result<RetrievalResult> {
    if data.dim == 2 {
        return match opts.branch {
            Branch::Real => retrieve_real_field(data, None, opts),
            _ => retrieve_2d(data, opts),
        };
    }
    let basis = basis.ok_or_else(|| Error::Mismatch("retrieval for d ≥ 3 needs a basis".into()))?;
    match opts.branch {
        Branch::Mean => retrieve_3d_mean(data, basis, opts),
        Branch::Sparse => retrieve_3d_sparse(data, basis, opts),
        Branch::Real => retrieve_real_field(data, Some(basis), opts),
        Branch::Auto => match retrieve_3d_mean(data, basis, opts) {
            Err(Error::BranchNotApplicable(_)) => retrieve_3d_sparse(data, basis, opts),
            other => other,
        },
    }
}
