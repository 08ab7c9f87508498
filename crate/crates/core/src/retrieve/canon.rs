use std::cmp::Ordering;

use num_complex::Complex64;

use crate::field::HerglotzField;

const PIVOT: f64 = 1e-12;

fn gauged(u: &HerglotzField) -> HerglotzField {
    let flat = u.flat();
    let floor = PIVOT * u.max_abs();
    match flat.iter().find(|c| c.norm() > floor) {
        Some(c) if u.max_abs() > 0.0 => {
            let mut v = u.scaled(c.conj() / c.norm());
            // the pivot is real positive by construction; drop rounding
            for a in v.coeffs_mut().iter_mut().flatten() {
                if a.norm() > floor {
                    *a = Complex64::new(c.norm(), 0.0);
                    break;
                }
            }
            v
        }
        _ => u.clone(),
    }
}

fn compare(a: &HerglotzField, b: &HerglotzField) -> Ordering {
    let tol = PIVOT * a.max_abs().max(b.max_abs());
    for (x, y) in a.flat().iter().zip(b.flat()) {
        for (p, q) in [(x.re, y.re), (x.im, y.im)] {
            if (p - q).abs() > tol {
                return p.total_cmp(&q);
            }
        }
    }
    Ordering::Equal
}

/// Deterministic representative of {c·u, c·ū : |c| = 1}: the first
/// coefficient above 1e−12·max (degree-major, index-minor) is made real
/// positive, and of u and ū the lexicographically smaller coefficient
/// sequence (by real, then imaginary part) is kept, u on ties.
pub fn canonicalize(u: &HerglotzField) -> HerglotzField {
    let a = gauged(u);
    let b = gauged(&u.conjugate());
    match compare(&b, &a) {
        Ordering::Less => b,
        _ => a,
    }
}
