use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::{GaussJacobi, GaussLegendre};

use crate::error::{Error, Result};

/// Product quadrature on S^{d−1}.
///
/// d = 2: `resolution` equally spaced angles, exact for trigonometric
/// degree < resolution. d ≥ 3: `resolution` Gauss–Jacobi nodes in
/// t = x_d (weight (1−t²)^{(d−3)/2}; Gauss–Legendre for d = 3) times the
/// grid on S^{d−2}, whose circle factor has 2·resolution angles. Exact
/// for polynomials of degree ≤ 2·resolution − 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    dim: usize,
    resolution: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

/// Surface measure of S^{d−1}: 2π^{d/2}/Γ(d/2).
pub fn sphere_area(dim: usize) -> f64 {
    2.0 * PI.powf(dim as f64 / 2.0) / crate::specfun::gamma(dim as f64 / 2.0)
}

pub fn sphere_grid(dim: usize, resolution: usize) -> Result<SphereGrid> {
    SphereGrid::new(dim, resolution)
}

impl SphereGrid {
    pub fn new(dim: usize, resolution: usize) -> Result<Self> {
        if dim < 2 || dim > 8 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if resolution == 0 {
            return Err(Error::Domain("grid resolution must be positive".into()));
        }
        let (nodes, weights) = if dim == 2 {
            circle(resolution)
        } else {
            let sub = if dim == 3 { circle(2 * resolution) } else {
                let g = SphereGrid::new(dim - 1, resolution)?;
                (g.nodes, g.weights)
            };
            let polar = polar_rule(dim, resolution);
            let mut nodes = Vec::with_capacity(polar.len() * sub.0.len());
            let mut weights = Vec::with_capacity(nodes.capacity());
            for &(t, wt) in &polar {
                let s = (1.0 - t * t).max(0.0).sqrt();
                for (y, wy) in sub.0.iter().zip(&sub.1) {
                    let mut x: Vec<f64> = y.iter().map(|v| s * v).collect();
                    x.push(t);
                    nodes.push(x);
                    weights.push(wt * wy);
                }
            }
            (nodes, weights)
        };
        Ok(SphereGrid { dim, resolution, nodes, weights })
    }

    /// Smallest grid integrating polynomials (d=2: trigonometric
    /// polynomials) of the given degree exactly.
    pub fn for_degree(dim: usize, degree: usize) -> Result<Self> {
        if dim == 2 {
            Self::new(2, degree + 1)
        } else {
            Self::new(dim, degree / 2 + 1)
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn area(&self) -> f64 {
        sphere_area(self.dim)
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// Average with respect to the normalized measure dσ/σ.
    pub fn mean(&self, values: &[f64]) -> f64 {
        self.integrate(values) / self.area()
    }
}

fn circle(n: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let w = 2.0 * PI / n as f64;
    let nodes = (0..n)
        .map(|k| {
            let phi = w * k as f64;
            vec![phi.cos(), phi.sin()]
        })
        .collect();
    (nodes, vec![w; n])
}

fn polar_rule(dim: usize, n: usize) -> Vec<(f64, f64)> {
    let deg = NonZeroUsize::new(n).expect("positive resolution");
    let mut rule: Vec<(f64, f64)> = if dim == 3 {
        GaussLegendre::new(deg).as_node_weight_pairs().to_vec()
    } else {
        let a = (dim as f64 - 3.0) / 2.0;
        let exp = gauss_quad::FiniteAboveNegOneF64::new(a).expect("exponent above −1");
        GaussJacobi::new(deg, exp, exp).as_node_weight_pairs().to_vec()
    };
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// Spherical angles of a unit vector: d = 2 → [φ]; d = 3 → [polar, azimuth].
pub fn angles_of(x: &[f64]) -> Vec<f64> {
    match x.len() {
        2 => vec![x[1].atan2(x[0])],
        _ => {
            let polar = x[x.len() - 1].clamp(-1.0, 1.0).acos();
            vec![polar, x[1].atan2(x[0])]
        }
    }
}

/// Inverse of [`angles_of`] for d ∈ {2, 3}.
pub fn point_from_angles(angles: &[f64]) -> Vec<f64> {
    match angles {
        [phi] => vec![phi.cos(), phi.sin()],
        [polar, az] => vec![polar.sin() * az.cos(), polar.sin() * az.sin(), polar.cos()],
        _ => panic!("angles for d = 2 or 3 only"),
    }
}
