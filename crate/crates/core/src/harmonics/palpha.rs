//! The harmonic basis p_α(x) = (−1)^m / (2^m ((d−2)/2)_m) · |x|^{d−2+2m} ∂^α |x|^{2−d},
//! indexed by α with |α| = m and α_d ∈ {0, 1}.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{MultiIndex, Polynomial};
use crate::error::{Error, Result};

/// N_m = N_m^0 ∪ N_m^1, in a fixed order: α_d = 0 first, each block in
/// descending lexicographic order (x_1^m leads).
pub fn palpha_indices(dim: usize, m: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for last in 0..=1u32.min(m as u32) {
        let mut block = Vec::new();
        compositions(m as u32 - last, dim - 1, &mut vec![], &mut block);
        for mut a in block {
            a.push(last);
            out.push(MultiIndex(a));
        }
    }
    out
}

fn compositions(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        let mut v = prefix.clone();
        v.push(total);
        out.push(v);
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// Exact construction by symbolic differentiation. Derivatives of |x|^{2−d}
/// are kept as Σ_k Q_k(x) |x|^{2−d−2k}, so each ∂_i maps
/// Q_k ↦ ∂_i Q_k (same k) + (2−d−2k) x_i Q_k (k+1).
pub fn p_alpha(alpha: &MultiIndex, dim: usize) -> Result<Polynomial> {
    if dim < 3 {
        return Err(Error::UnsupportedBasis { kind: "palpha", dim });
    }
    if alpha.dim() != dim {
        return Err(Error::Mismatch(format!("multi-index has {} entries, dimension is {dim}", alpha.dim())));
    }
    let m = alpha.degree() as usize;
    let mut q: Vec<Polynomial> = vec![Polynomial::one(dim)];
    for (i, &e) in alpha.as_slice().iter().enumerate() {
        for _ in 0..e {
            let mut next = vec![Polynomial::zero(dim); q.len() + 1];
            for (k, qk) in q.iter().enumerate() {
                next[k] = &next[k] + &qk.derivative(i);
                let c = BigRational::from_integer(BigInt::from(2 - dim as i64 - 2 * k as i64));
                next[k + 1] = &next[k + 1] + &(&Polynomial::variable(dim, i) * qk).scale(&c);
            }
            q = next;
        }
    }
    // |x|^{d−2+2m} · Q_k |x|^{2−d−2k} = Q_k |x|^{2(m−k)}
    let n2 = Polynomial::norm_squared(dim);
    let mut out = Polynomial::zero(dim);
    for (k, qk) in q.iter().enumerate() {
        if qk.is_zero() {
            continue;
        }
        let mut t = qk.clone();
        for _ in k..m {
            t = &t * &n2;
        }
        out = &out + &t;
    }
    // (−1)^m / (2^m ((d−2)/2)_m)
    let half_d = BigRational::new(BigInt::from(dim as i64 - 2), BigInt::from(2));
    let mut denom = BigRational::one();
    for i in 0..m {
        denom *= (&half_d + BigRational::from_integer(BigInt::from(i))) * BigRational::from_integer(BigInt::from(2));
    }
    let mut c = BigRational::one() / denom;
    if m % 2 == 1 {
        c = -c;
    }
    debug_assert!(!c.is_zero());
    Ok(out.scale(&c))
}
