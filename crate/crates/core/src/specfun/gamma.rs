use std::f64::consts::PI;

/// Γ(x). Integers and half-integers go through exact recursion from Γ(1)
/// and Γ(1/2); everything else through the Lanczos approximation in
/// `statrs` (relative error below 1e-14 on (0, 50]).
pub fn gamma(x: f64) -> f64 {
    let twice = 2.0 * x;
    if twice.fract() == 0.0 && x > 0.0 && x <= 171.0 {
        let (mut acc, start) = if x.fract() == 0.0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
        let mut t = start;
        while t < x {
            acc *= t;
            t += 1.0;
        }
        return acc;
    }
    statrs::function::gamma::gamma(x)
}

/// Rising factorial (a)_k = a(a+1)...(a+k−1).
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// (r/2)^ν / Γ(ν+1) for ν = twice/2 ≥ 0, built as a running product so
/// that neither factor overflows separately.
pub(crate) fn power_over_gamma(half: f64, twice: u64) -> f64 {
    let mut p = if twice % 2 == 0 { 1.0 } else { 2.0 * half.sqrt() / PI.sqrt() };
    let start = if twice % 2 == 0 { 1.0 } else { 1.5 };
    for i in 0..twice / 2 {
        p *= half / (start + i as f64);
    }
    p
}
