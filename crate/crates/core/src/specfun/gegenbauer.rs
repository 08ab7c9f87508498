use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// C_m^λ(z) from the finite sum
/// Σ_k (−1)^k (λ)_{m−k} / (k! (m−2k)!) (2z)^{m−2k}.
pub fn gegenbauer(m: usize, lambda: f64, z: f64) -> f64 {
    let mut acc = 0.0;
    for k in 0..=m / 2 {
        let p = m - 2 * k;
        let mut c = super::pochhammer(lambda, m - k);
        for i in 1..=k {
            c /= i as f64;
        }
        for i in 1..=p {
            c /= i as f64;
        }
        let term = c * (2.0 * z).powi(p as i32);
        acc += if k % 2 == 0 { term } else { -term };
    }
    acc
}

/// The same sum in exact rational arithmetic.
pub fn gegenbauer_exact(m: usize, lambda: &BigRational, z: &BigRational) -> BigRational {
    let two_z = z * BigRational::from_integer(BigInt::from(2));
    let mut acc = BigRational::zero();
    for k in 0..=m / 2 {
        let p = m - 2 * k;
        let mut c = BigRational::one();
        for i in 0..m - k {
            c *= lambda + BigRational::from_integer(BigInt::from(i));
        }
        let fact = |n: usize| (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i));
        c /= BigRational::from_integer(fact(k) * fact(p));
        let mut pow = BigRational::one();
        for _ in 0..p {
            pow *= &two_z;
        }
        let term = c * pow;
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}
