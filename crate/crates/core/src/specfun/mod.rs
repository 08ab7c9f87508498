//! Bessel functions of integer and half-integer order, Gegenbauer
//! polynomials, and the Bessel-product expansion.

mod bessel;
mod gamma;
mod gegenbauer;
pub(crate) mod series;

pub use bessel::{
    bessel_bound, bessel_j, bessel_product_coefficients, bessel_product_integral,
    bessel_product_integral_with_estimate, bessel_product_series, radial_factor, BesselOrder,
};
pub use gamma::{gamma, pochhammer};
pub use gegenbauer::{gegenbauer, gegenbauer_exact};

use crate::error::{Error, Result};

/// Truncation control for the power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesBudget {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl SeriesBudget {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || max_terms < 1 {
            return Err(Error::Domain(format!(
                "series budget needs rel_tol > 0 and max_terms ≥ 1 (got {rel_tol}, {max_terms})"
            )));
        }
        Ok(SeriesBudget { rel_tol, max_terms })
    }

    /// A generous budget for internal evaluations at moderate radii.
    pub fn generous() -> Self {
        SeriesBudget { rel_tol: 1e-15, max_terms: 4096 }
    }
}

impl Default for SeriesBudget {
    fn default() -> Self {
        SeriesBudget { rel_tol: 1e-14, max_terms: 256 }
    }
}
