//! Summation of the alternating hypergeometric-type series behind every
//! Bessel evaluation in the crate:
//!
//!   S = Σ_k s_k,   s_0 = 1,   s_{k+1} = −h² · num(k)/den(k) · s_k,
//!
//! where `h = r/2` and `num`, `den` are exact positive integers. Near the
//! peak of the terms the partial sums cancel heavily once `r` grows
//! (for the product series at r = 10 the largest term is ~1e42 times the
//! sum), so the sum is first attempted in f64, then in double-double, then
//! in big-integer fixed point, escalating whenever the rounding bound
//! exceeds the requested relative tolerance.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::SeriesBudget;

const EPS: f64 = f64::EPSILON;
const DD_EPS: f64 = 4.93e-32;
const MAX_BITS: u64 = 16384;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Unconverged {
    pub partial: f64,
    pub terms: usize,
}

struct Pass<T> {
    sum: T,
    max_abs: f64,
    terms: usize,
    converged: bool,
}

pub(crate) fn sum_series<F>(half: f64, ratio: F, budget: &SeriesBudget) -> Result<f64, Unconverged>
where
    F: Fn(u64) -> (u128, u128),
{
    let tol = budget.rel_tol;
    let p = pass_f64(half, &ratio, budget);
    if !p.converged {
        return Err(Unconverged { partial: p.sum, terms: p.terms });
    }
    let bound = (4.0 + 2.0 * p.terms as f64) * EPS * p.max_abs;
    if bound <= tol * p.sum.abs() {
        return Ok(p.sum);
    }

    let p = pass_dd(half, &ratio, budget);
    if !p.converged {
        return Err(Unconverged { partial: p.sum.hi, terms: p.terms });
    }
    let bound = (4.0 + 2.0 * p.terms as f64) * DD_EPS * p.max_abs;
    let approx = p.sum.hi.abs();
    if bound <= tol * approx {
        return Ok(p.sum.to_f64());
    }

    // Enough fraction bits to resolve the sum below the largest term.
    let floor = (tol * approx).max(p.max_abs * 1e-300).max(f64::MIN_POSITIVE);
    let needed = (p.max_abs / floor).log2().max(0.0) + (p.terms as f64).log2() + 64.0;
    let bits = (needed.ceil() as u64).clamp(128, MAX_BITS);
    let p = pass_big(half, &ratio, budget, bits);
    if !p.converged {
        return Err(Unconverged { partial: p.sum, terms: p.terms });
    }
    Ok(p.sum)
}

fn pass_f64<F>(half: f64, ratio: &F, budget: &SeriesBudget) -> Pass<f64>
where
    F: Fn(u64) -> (u128, u128),
{
    let x = half * half;
    let (mut s, mut sum, mut max_abs, mut prev) = (1.0f64, 1.0f64, 1.0f64, 1.0f64);
    let mut terms = 1;
    while terms < budget.max_terms {
        let (n, d) = ratio(terms as u64 - 1);
        s = -s * x * (n as f64) / (d as f64);
        sum += s;
        terms += 1;
        let a = s.abs();
        max_abs = max_abs.max(a);
        if a <= budget.rel_tol * sum.abs() && a < prev {
            return Pass { sum, max_abs, terms, converged: true };
        }
        prev = a;
    }
    Pass { sum, max_abs, terms, converged: false }
}

fn pass_dd<F>(half: f64, ratio: &F, budget: &SeriesBudget) -> Pass<DoubleDouble>
where
    F: Fn(u64) -> (u128, u128),
{
    let x = DoubleDouble::product(half, half);
    let mut s = DoubleDouble::from(1.0);
    let mut sum = s;
    let (mut max_abs, mut prev) = (1.0f64, 1.0f64);
    let mut terms = 1;
    while terms < budget.max_terms {
        let (n, d) = ratio(terms as u64 - 1);
        s = s.mul(x).mul_f64(n as f64).div_f64(d as f64).neg();
        sum = sum.add(s);
        terms += 1;
        let a = s.hi.abs();
        max_abs = max_abs.max(a);
        if a <= budget.rel_tol * sum.hi.abs() && a < prev {
            return Pass { sum, max_abs, terms, converged: true };
        }
        prev = a;
    }
    Pass { sum, max_abs, terms, converged: false }
}

fn pass_big<F>(half: f64, ratio: &F, budget: &SeriesBudget, bits: u64) -> Pass<f64>
where
    F: Fn(u64) -> (u128, u128),
{
    // half = mant · 2^exp exactly, so h² is an exact dyadic rational.
    let (mant, exp) = decompose(half);
    let xm = BigInt::from(mant) * BigInt::from(mant);
    let xe = 2 * exp;
    let mut s = BigInt::from(1) << bits;
    let mut sum = s.clone();
    let (mut max_abs, mut prev) = (1.0f64, 1.0f64);
    let mut terms = 1;
    while terms < budget.max_terms {
        let (n, d) = ratio(terms as u64 - 1);
        s = s * &xm * BigInt::from(n);
        if xe >= 0 {
            s <<= xe as usize;
        } else {
            s >>= (-xe) as usize;
        }
        s /= BigInt::from(d);
        s = -s;
        sum += &s;
        terms += 1;
        let a = fixed_to_f64(&s, bits).abs();
        max_abs = max_abs.max(a);
        if a <= budget.rel_tol * fixed_to_f64(&sum, bits).abs() && a < prev {
            return Pass { sum: fixed_to_f64(&sum, bits), max_abs, terms, converged: true };
        }
        prev = a;
    }
    Pass { sum: fixed_to_f64(&sum, bits), max_abs, terms, converged: false }
}

/// `x = mant · 2^exp` with integer mantissa (x ≥ 0, finite).
fn decompose(x: f64) -> (u64, i64) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), biased - 1075)
    }
}

/// `v / 2^shift` rounded to f64.
fn fixed_to_f64(v: &BigInt, shift: u64) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let len = v.bits();
    let drop = len.saturating_sub(63);
    let top = (v.abs() >> drop).to_i64().unwrap_or(i64::MAX) as f64;
    let signed = if v.is_negative() { -top } else { top };
    scale_pow2(signed, drop as i64 - shift as i64)
}

fn scale_pow2(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// Unevaluated sum `hi + lo` with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl From<f64> for DoubleDouble {
    fn from(hi: f64) -> Self {
        DoubleDouble { hi, lo: 0.0 }
    }
}

impl DoubleDouble {
    fn two_sum(a: f64, b: f64) -> DoubleDouble {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        DoubleDouble { hi: s, lo: err }
    }

    fn quick(a: f64, b: f64) -> DoubleDouble {
        let s = a + b;
        DoubleDouble { hi: s, lo: b - (s - a) }
    }

    pub fn product(a: f64, b: f64) -> DoubleDouble {
        let p = a * b;
        DoubleDouble { hi: p, lo: a.mul_add(b, -p) }
    }

    pub fn add(self, o: DoubleDouble) -> DoubleDouble {
        let s = Self::two_sum(self.hi, o.hi);
        let t = Self::two_sum(self.lo, o.lo);
        let r = Self::quick(s.hi, s.lo + t.hi);
        Self::quick(r.hi, r.lo + t.lo)
    }

    pub fn mul(self, o: DoubleDouble) -> DoubleDouble {
        let p = Self::product(self.hi, o.hi);
        Self::quick(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }

    pub fn mul_f64(self, b: f64) -> DoubleDouble {
        let p = Self::product(self.hi, b);
        Self::quick(p.hi, p.lo + self.lo * b)
    }

    pub fn div_f64(self, b: f64) -> DoubleDouble {
        let q1 = self.hi / b;
        let p = Self::product(q1, b);
        let r = Self::two_sum(self.hi, -p.hi);
        let q2 = (r.hi + (r.lo - p.lo + self.lo)) / b;
        Self::quick(q1, q2)
    }

    pub fn neg(self) -> DoubleDouble {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_neg(half: f64, budget: &SeriesBudget) -> f64 {
        // Σ (−h²)^k / k! = exp(−h²)
        sum_series(half, |k| (1, k as u128 + 1), budget).unwrap()
    }

    #[test]
    fn exponential_series_all_tiers() {
        let b = SeriesBudget { rel_tol: 1e-14, max_terms: 4096 };
        for &h in &[0.0f64, 0.1, 1.0, 3.0, 6.0] {
            let want = (-h * h).exp();
            let got = exp_neg(h, &b);
            assert!(((got - want) / want).abs() < 1e-13, "h={h}: {got} vs {want}");
        }
    }

    #[test]
    fn big_tier_reaches_extreme_cancellation() {
        // exp(−100): largest term ~1e42, answer ~3.7e−44.
        let b = SeriesBudget { rel_tol: 1e-14, max_terms: 4096 };
        let got = exp_neg(10.0, &b);
        let want = (-100f64).exp();
        assert!(((got - want) / want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn budget_exhaustion_reports_terms() {
        let b = SeriesBudget { rel_tol: 1e-14, max_terms: 5 };
        let e = sum_series(3.0, |k| (1, k as u128 + 1), &b).unwrap_err();
        assert_eq!(e.terms, 5);
    }

    #[test]
    fn double_double_division_round_trips() {
        let x = DoubleDouble::from(1.0).div_f64(3.0).mul_f64(3.0);
        assert!((x.to_f64() - 1.0).abs() < 1e-30 + f64::EPSILON);
        let y = DoubleDouble::from(1.0).div_f64(3.0);
        assert!(y.lo != 0.0);
    }

    #[test]
    fn fixed_point_conversion() {
        let v = BigInt::from(3) << 200u32;
        assert_eq!(fixed_to_f64(&v, 201), 1.5);
        assert_eq!(fixed_to_f64(&-v, 201), -1.5);
        assert_eq!(decompose(0.75), (3 << 51, -53));
    }
}
