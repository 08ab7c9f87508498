//! Per-mode relations I / C / R between two equal-magnitude fields, and why
//! mixing I and C across non-R modes changes |u|.

use herglotz::field::*;
use herglotz::retrieve::*;
use num_complex::Complex64;

fn main() {
    let u = FieldGenerator { zero_mean: true, ..FieldGenerator::new(3) }
        .generate_seeded(HerglotzField::fourier_basis(3), 8)
        .unwrap();
    let kappa = Complex64::from_polar(1.0, 1.2);
    for (name, v) in [("κ·u", u.scaled(kappa)), ("κ·ū", u.conjugate().scaled(kappa))] {
        println!("{name}:");
        for t in classify_modes(&u, &v, 1e-9).unwrap() {
            println!("  m = {} {:<3} κ = {:.6}", t.m, t.flags(), t.kappa.or(t.kappa_conjugate).unwrap());
        }
    }

    // keep mode 1, conjugate mode 2
    let mut mixed = u.clone();
    let (a, b) = (u.fourier_coeff(2), u.fourier_coeff(-2));
    mixed.coeffs_mut()[2] = vec![b.conj(), a.conj()];
    let cmp = compare_magnitudes(&u, &mixed, 1e-9).unwrap();
    println!("mixed I/C: equal magnitude {} (gap {:.3e})", cmp.coefficient_equal, cmp.coefficient_deviation);

    // a type-R mode may go either way
    let r = HerglotzField::from_fourier(2, |k| match k {
        1 | -1 => Complex64::new(1.0, 0.0),
        2 => Complex64::new(0.4, 0.3),
        _ => Complex64::new(0.0, 0.0),
    });
    let mut s = r.clone();
    s.coeffs_mut()[1] = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
    let t = classify_modes(&r, &s, 1e-9).unwrap();
    println!("type R mode 1: {}, equal magnitude {}", t[0].flags(), equal_magnitude(&r, &s, 1e-12));
    println!("solve_pair(2, 1): {:?}", solve_pair(2.0, Complex64::new(1.0, 0.0), 1e-12).unwrap());
}
