use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

use super::gamma::power_over_gamma;
use super::series::{sum_series, Unconverged};
use super::SeriesBudget;
use crate::error::{Error, Result};

/// Order of the form m + (d−2)/2: a nonnegative integer or half-integer,
/// or a negative integer (reflection convention J_{−n} = (−1)^n J_n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BesselOrder {
    twice: i64,
}

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        let t = 2.0 * nu;
        if !t.is_finite() || t.fract() != 0.0 || t.abs() > 1e9 {
            return Err(Error::InvalidOrder(nu));
        }
        let twice = t as i64;
        if twice < 0 && twice % 2 != 0 {
            return Err(Error::InvalidOrder(nu));
        }
        Ok(BesselOrder { twice })
    }

    pub fn integer(n: i64) -> Self {
        BesselOrder { twice: 2 * n }
    }

    /// ν(m) = m + (d−2)/2.
    pub fn for_degree(m: usize, dim: usize) -> Self {
        BesselOrder { twice: (2 * m + dim) as i64 - 2 }
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn twice(self) -> i64 {
        self.twice
    }
}

fn twice_alpha(alpha: f64) -> Result<u64> {
    let t = 2.0 * alpha;
    if !t.is_finite() || t < 0.0 || t.fract() != 0.0 {
        return Err(Error::InvalidOrder(alpha));
    }
    Ok(t as u64)
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::Domain(format!("radius must be nonnegative, got {r}")));
    }
    Ok(())
}

fn unconverged(pref: f64) -> impl Fn(Unconverged) -> Error {
    move |u| Error::Convergence { partial: pref * u.partial, terms: u.terms }
}

/// Normalized J series: Σ_k (−h²)^k / (k! (ν+1)_k) with ν = twice/2.
fn j_series(twice: u64, half: f64, budget: &SeriesBudget) -> std::result::Result<f64, Unconverged> {
    let t = twice as u128;
    sum_series(half, |k| (2, (k as u128 + 1) * (t + 2 * k as u128 + 2)), budget)
}

pub fn bessel_j(nu: BesselOrder, r: f64, budget: SeriesBudget) -> Result<f64> {
    check_radius(r)?;
    let (twice, sign) = if nu.twice < 0 {
        let n = -nu.twice / 2;
        (-nu.twice as u64, if n % 2 == 0 { 1.0 } else { -1.0 })
    } else {
        (nu.twice as u64, 1.0)
    };
    let half = r / 2.0;
    let pref = sign * power_over_gamma(half, twice);
    if pref == 0.0 {
        return Ok(0.0);
    }
    let s = j_series(twice, half, &budget).map_err(unconverged(pref))?;
    Ok(pref * s)
}

/// r^{−α} J_{m+α}(r) with α = (d−2)/2: the radial factor of a degree-m
/// term. Finite at r = 0, where it equals 2^{−α}/Γ(α+1) for m = 0.
pub fn radial_factor(m: usize, dim: usize, r: f64, budget: SeriesBudget) -> Result<f64> {
    check_radius(r)?;
    let a = dim as u64 - 2;
    let half = r / 2.0;
    // 2^{−α}/Γ(α+1) · Π_{i=1}^{m} h/(i+α)
    let mut pref = power_over_gamma(0.5, a);
    for i in 1..=m {
        pref *= half / (i as f64 + a as f64 / 2.0);
    }
    if pref == 0.0 {
        return Ok(0.0);
    }
    let s = j_series(2 * m as u64 + a, half, &budget).map_err(unconverged(pref))?;
    Ok(pref * s)
}

/// Upper bound |J_ν(r)| ≤ 1 for ν = 0 and 2/(√π Γ(ν+1/2)) (r/2)^ν otherwise.
pub fn bessel_bound(nu: BesselOrder, r: f64) -> f64 {
    let v = (nu.twice.unsigned_abs()) as f64 / 2.0;
    if v == 0.0 {
        return 1.0;
    }
    2.0 / (std::f64::consts::PI.sqrt() * super::gamma(v + 0.5)) * (r / 2.0).powf(v)
}

/// Integer numerator/denominator of the ratio of consecutive terms of
/// the product series, in units of (r/2)².
fn product_ratio(n: u64, m: u64, a: u64) -> impl Fn(u64) -> (u128, u128) {
    let l = (n + m + a) as u128;
    let (n2, m2) = ((2 * n + a) as u128, (2 * m + a) as u128);
    move |k| {
        let k = k as u128;
        let num = 4 * (l + 2 * k + 1) * (l + 2 * k + 2);
        let den = (k + 1) * (n2 + 2 * k + 2) * (m2 + 2 * k + 2) * (l + k + 1);
        (num, den)
    }
}

/// J_{n+α}(r) J_{m+α}(r) through its own power series in r.
pub fn bessel_product_series(n: usize, m: usize, alpha: f64, r: f64, budget: SeriesBudget) -> Result<f64> {
    check_radius(r)?;
    let a = twice_alpha(alpha)?;
    let (n, m) = (n as u64, m as u64);
    let half = r / 2.0;
    let pref = power_over_gamma(half, 2 * n + a) * power_over_gamma(half, 2 * m + a);
    if pref == 0.0 {
        return Ok(0.0);
    }
    let s = sum_series(half, product_ratio(n, m, a), &budget).map_err(unconverged(pref))?;
    Ok(pref * s)
}

/// Coefficients c_k with J_{n+α}(r) J_{m+α}(r) = Σ_k c_k (r/2)^{n+m+2α+2k}.
pub fn bessel_product_coefficients(n: usize, m: usize, alpha: f64, count: usize) -> Result<Vec<f64>> {
    let a = twice_alpha(alpha)?;
    let (n, m) = (n as u64, m as u64);
    let ratio = product_ratio(n, m, a);
    let mut c = power_over_gamma(1.0, 2 * n + a) * power_over_gamma(1.0, 2 * m + a);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        out.push(c);
        let (num, den) = ratio(k as u64);
        c = -c * num as f64 / den as f64;
    }
    Ok(out)
}

const PANEL_NODES: usize = 16;

fn panel_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(NonZeroUsize::new(PANEL_NODES).unwrap())
            .as_node_weight_pairs()
            .to_vec()
    })
}

fn composite<F: FnMut(f64) -> Result<f64>>(panels: usize, lo: f64, hi: f64, mut f: F) -> Result<f64> {
    let width = (hi - lo) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let (a, b) = (lo + p as f64 * width, lo + (p + 1) as f64 * width);
        let (mid, rad) = ((a + b) / 2.0, (b - a) / 2.0);
        for &(x, w) in panel_rule() {
            acc += w * rad * f(mid + rad * x)?;
        }
    }
    Ok(acc)
}

/// (2/π) ∫_0^{π/2} J_{n+m+2α}(2r cos θ) cos((n−m)θ) dθ by composite
/// Gauss–Legendre with `quad_points` nodes in total (rounded up to whole
/// 16-node panels). An independent route to J_{n+α} J_{m+α}.
pub fn bessel_product_integral(n: usize, m: usize, alpha: f64, r: f64, quad_points: usize) -> Result<f64> {
    product_integral_panels(n, m, alpha, r, quad_points.div_ceil(PANEL_NODES).max(1))
}

/// As [`bessel_product_integral`], plus the difference against the rule
/// with half as many panels as an accuracy estimate.
pub fn bessel_product_integral_with_estimate(
    n: usize,
    m: usize,
    alpha: f64,
    r: f64,
    quad_points: usize,
) -> Result<(f64, f64)> {
    let panels = quad_points.div_ceil(PANEL_NODES).max(2);
    let fine = product_integral_panels(n, m, alpha, r, panels)?;
    let coarse = product_integral_panels(n, m, alpha, r, panels / 2)?;
    Ok((fine, (fine - coarse).abs()))
}

fn product_integral_panels(n: usize, m: usize, alpha: f64, r: f64, panels: usize) -> Result<f64> {
    check_radius(r)?;
    let a = twice_alpha(alpha)? as i64;
    let order = BesselOrder { twice: 2 * ((n + m) as i64 + a) };
    let budget = SeriesBudget { rel_tol: 1e-15, max_terms: 4096 };
    let freq = n as f64 - m as f64;
    let integral = composite(panels, 0.0, std::f64::consts::FRAC_PI_2, |t| {
        Ok(bessel_j(order, 2.0 * r * t.cos(), budget)? * (freq * t).cos())
    })?;
    Ok(integral * 2.0 / std::f64::consts::PI)
}
