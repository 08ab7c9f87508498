//! Recovering magnitude data Re c_{m,n} from gridded samples of |u|²:
//! an angular transform per radius, then a radial unmixing of each
//! angular component against products of Bessel functions.

mod angular;
mod unmix;

use num_complex::Complex64;

pub use angular::{angular_decompose, RadialProfile};
pub use unmix::{compatible_pairs, legendre_coupling, radial_unmix, PairTerm, UnmixMethod, UnmixReport, CONDITION_WARNING};

use crate::error::{Error, Result};
use crate::field::{chebyshev_radii, data_grid, pair_count, pair_index, pairs, MagnitudeData, MagnitudeGrid, PairSpectrum, SampledPairs};
use crate::harmonics::SphereGrid;
use angular::legendre;
use unmix::{solve_blocks, Block};

/// Outer sampling radius used when none is given. Products J_m J_n of
/// degree m+n = 2M are ~(r/2)^{2M}/(M!)² near the origin, far below
/// double precision on the unit ball for M ≳ 4; sampling out to a few
/// wavelengths keeps every pair visible.
pub const DEFAULT_SAMPLE_RADIUS: f64 = 8.0;
pub const DEFAULT_RADIAL_NODES: usize = 40;

/// Default sampling layout for degree `max_degree`: Chebyshev radii on
/// (0.05R, R) and an angular grid resolving |u|² without aliasing.
pub fn sampling_grid(dim: usize, max_degree: usize, radial_nodes: Option<usize>, angular_nodes: Option<usize>, radius: Option<f64>) -> Result<(Vec<f64>, SphereGrid)> {
    let radii = chebyshev_radii(radial_nodes.unwrap_or(DEFAULT_RADIAL_NODES), radius.unwrap_or(DEFAULT_SAMPLE_RADIUS));
    let grid = match dim {
        2 => SphereGrid::new(2, angular_nodes.unwrap_or((4 * max_degree + 4).max(8)))?,
        3 => SphereGrid::new(3, angular_nodes.unwrap_or(2 * max_degree + 2))?,
        d => return Err(Error::UnsupportedDimension(d)),
    };
    Ok((radii, grid))
}

#[derive(Debug, Clone)]
pub struct Extraction {
    pub data: MagnitudeData,
    pub reports: Vec<UnmixReport>,
    /// Max forward residual relative to the largest sample.
    pub residual: f64,
    /// Worst condition estimate over the radial solves.
    pub condition: f64,
    pub warnings: Vec<String>,
}

/// Highest degree consistent with the angular content: |u|² of a field of
/// degree M carries frequencies (d = 2) or Legendre degrees (d = 3) up to 2M.
pub fn estimate_max_degree(profiles: &[RadialProfile]) -> usize {
    let top = profiles.iter().map(RadialProfile::max_abs).fold(0.0, f64::max);
    let q = profiles.iter().filter(|p| p.max_abs() > 1e-9 * top).map(|p| p.frequency).max().unwrap_or(0);
    q.div_ceil(2)
}

/// Magnitude data of the field behind `samples`. d = 2 yields the exact
/// four-frequency spectra; d = 3 (zonal data about e_3) yields samples of
/// Re c_{m,n} on the default data grid.
pub fn extract_magnitude_data(samples: &MagnitudeGrid, max_degree: Option<usize>, method: UnmixMethod) -> Result<Extraction> {
    let profiles = angular_decompose(samples)?;
    let big_m = max_degree.unwrap_or_else(|| estimate_max_degree(&profiles));
    let available = profiles.len() - 1;
    let needed = 2 * big_m;
    if needed > available {
        return Err(Error::Domain(format!(
            "degree {big_m} needs angular content up to {needed}, the grid resolves {available}"
        )));
    }
    let scale = samples.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let (data, reports) = match samples.dim {
        2 => extract_2d(&profiles, big_m, method)?,
        _ => extract_3d(&profiles, big_m, method)?,
    };
    // content above 2M is unexplained by any pair
    let leftover = profiles[needed + 1..].iter().map(RadialProfile::max_abs).fold(0.0, f64::max);
    let absolute = reports.iter().map(|r| r.residual).fold(leftover, f64::max);
    let residual = if scale > 0.0 { absolute / scale } else { 0.0 };
    let condition = reports.iter().map(|r| r.condition).fold(1.0, f64::max);
    let warnings = reports.iter().filter_map(|r| r.warning.clone()).collect();
    Ok(Extraction { data, reports, residual, condition, warnings })
}

fn extract_2d(profiles: &[RadialProfile], big_m: usize, method: UnmixMethod) -> Result<(MagnitudeData, Vec<UnmixReport>)> {
    let zero = Complex64::new(0.0, 0.0);
    let mut spectra: Vec<PairSpectrum> =
        pairs(big_m).map(|(m, n)| PairSpectrum { m, n, high: zero, low: zero }).collect();
    let mut reports = Vec::new();
    for p in &profiles[..=2 * big_m] {
        let q = p.frequency;
        let rep = radial_unmix(p, big_m, method)?;
        for (&(m, n), &g) in rep.pairs.iter().zip(&rep.coefficients) {
            let g = if q == 0 { Complex64::new(g.re, 0.0) } else { g };
            let s = &mut spectra[pair_index(m, n, big_m)];
            if m + n == q {
                s.high = g;
            } else {
                s.low = g;
            }
        }
        reports.push(rep);
    }
    Ok((MagnitudeData { dim: 2, max_degree: big_m, spectra: Some(spectra), samples: None }, reports))
}

fn extract_3d(profiles: &[RadialProfile], big_m: usize, method: UnmixMethod) -> Result<(MagnitudeData, Vec<UnmixReport>)> {
    let labels: Vec<(usize, usize)> = pairs(big_m).collect();
    let blocks: Vec<Block> = profiles[..=2 * big_m]
        .iter()
        .map(|p| Block {
            profile: p,
            terms: compatible_pairs(3, p.frequency, big_m).into_iter().map(|t| (pair_index(t.m, t.n, big_m), t)).collect(),
        })
        .collect();
    let rep = solve_blocks(&blocks, &labels, 3, big_m, method)?;
    let grid = data_grid(3, big_m)?;
    let mut values = vec![Vec::with_capacity(grid.len()); pair_count(big_m)];
    for x in grid.nodes() {
        let t = x[2];
        let leg: Vec<f64> = (0..=big_m).map(|m| legendre(m, t)).collect();
        for (idx, (m, n)) in pairs(big_m).enumerate() {
            values[idx].push(rep.coefficients[idx].re * leg[m] * leg[n]);
        }
    }
    let data = MagnitudeData { dim: 3, max_degree: big_m, spectra: None, samples: Some(SampledPairs { grid, values }) };
    Ok((data, vec![rep]))
}
