use std::f64::consts::PI;

use super::{radial_factors, HerglotzField};
use crate::harmonics::{angles_of, point_from_angles, SphereGrid};

/// |u|² sampled on a polar (d = 2) or spherical (d = 3) grid, stored
/// radius-major: `values[i * angles.len() + k]` is the sample at
/// `radii[i]` and `angles[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeGrid {
    pub dim: usize,
    pub radii: Vec<f64>,
    /// d = 2: [φ]; d = 3: [polar, azimuth].
    pub angles: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl MagnitudeGrid {
    pub fn value(&self, radius: usize, angle: usize) -> f64 {
        self.values[radius * self.angles.len() + angle]
    }

    /// Samples at one radius.
    pub fn ring(&self, radius: usize) -> &[f64] {
        let n = self.angles.len();
        &self.values[radius * n..(radius + 1) * n]
    }

    pub fn directions(&self) -> Vec<Vec<f64>> {
        self.angles.iter().map(|a| point_from_angles(a)).collect()
    }
}

/// `count` Chebyshev–Gauss nodes on (0.05R, R), ascending. Clustering at
/// both ends tames the r^{m+n} growth of the radial design.
pub fn chebyshev_radii(count: usize, radius: f64) -> Vec<f64> {
    let (a, b) = (0.05 * radius, radius);
    let mut r: Vec<f64> = (0..count)
        .map(|i| a + (b - a) * (1.0 + (PI * (2 * i + 1) as f64 / (2 * count) as f64).cos()) / 2.0)
        .collect();
    r.reverse();
    r
}

/// Sample |u|² at every radius × grid node.
pub fn sample_magnitude_grid(u: &HerglotzField, radii: &[f64], grid: &SphereGrid) -> MagnitudeGrid {
    let angles: Vec<Vec<f64>> = grid.nodes().iter().map(|x| angles_of(x)).collect();
    let mut values = Vec::with_capacity(radii.len() * grid.len());
    for &r in radii {
        let radial = radial_factors(u.dim(), u.max_degree(), r);
        for x in grid.nodes() {
            values.push(u.eval_with(&radial, x).norm_sqr());
        }
    }
    MagnitudeGrid { dim: u.dim(), radii: radii.to_vec(), angles, values }
}
