//! Magnitude data Re c_{m,n}, and what they do and do not determine.

use herglotz::field::*;
use num_complex::Complex64;

fn main() {
    let u = FieldGenerator::new(3).generate_seeded(HerglotzField::fourier_basis(3), 12).unwrap();
    let data = magnitude_coeffs(&u, None);
    println!("{:>3} {:>3} {:>28} {:>28}", "m", "n", "high (freq m+n)", "low (freq n−m)");
    for s in data.spectra.as_ref().unwrap() {
        println!("{:>3} {:>3} {:>13.6}{:>+14.6}i {:>13.6}{:>+14.6}i", s.m, s.n, s.high.re, s.high.im, s.low.re, s.low.im);
    }

    let c = Complex64::from_polar(1.0, 0.8);
    for (name, v) in [("c·u", u.scaled(c)), ("c·ū", u.conjugate().scaled(c))] {
        let t = trivially_equivalent(&u, &v, 1e-12).unwrap();
        println!("{name}: equal magnitude {}, verdict {}, c = {:.6}", equal_magnitude(&u, &v, 1e-12), t.verdict.name(), t.c.unwrap());
    }

    let mut w = u.clone();
    w.coeffs_mut()[2][1] += Complex64::new(1e-3, 0.0);
    let cmp = compare_magnitudes(&u, &w, 1e-9).unwrap();
    println!("perturbed: coefficient gap {:.2e}, grid gap {:.2e}", cmp.coefficient_deviation, cmp.grid_deviation);

    println!("degree powers: {:?}", (0..=3).map(|m| u.degree_power(m)).collect::<Vec<_>>());
}
