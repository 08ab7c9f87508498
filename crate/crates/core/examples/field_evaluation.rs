//! Evaluate a Herglotz field and its magnitude two ways.

use std::f64::consts::PI;

use herglotz::field::HerglotzField;
use herglotz::harmonics::*;
use num_complex::Complex64;

fn main() {
    // u = √(2π) (J_0(r) + i e^{2iφ} J_2(r))
    let u = HerglotzField::from_fourier(2, |k| match k {
        0 => Complex64::new(1.0, 0.0),
        2 => Complex64::new(0.0, 1.0),
        _ => Complex64::new(0.0, 0.0),
    });
    println!("{:>5} {:>6} {:>30} {:>14} {:>14}", "r", "φ", "u", "|u|²", "via pairs");
    for r in [0.0, 0.5, 2.0, 7.5] {
        for phi in [0.0, PI / 3.0] {
            let theta = [phi.cos(), phi.sin()];
            let v = u.eval(r, &theta);
            println!(
                "{r:>5} {phi:>6.3} {:>14.9}{:>+14.9}i {:>14.9} {:>14.9}",
                v.re,
                v.im,
                u.magnitude_sq(r, &theta),
                u.magnitude_sq_via_pairs(r, &theta)
            );
        }
    }

    // a degree-3 field in d = 3 from the p_α basis
    let basis = std::sync::Arc::new(Basis::new(BasisSpec::palpha(3, Normalization::Raw).unwrap(), 3).unwrap());
    let mut w = HerglotzField::zeros(basis, 3).unwrap();
    w.coeffs_mut()[0][0] = Complex64::new(1.0, 0.0);
    w.coeffs_mut()[3][2] = Complex64::new(0.3, -0.2);
    let x = point_from_angles(&[0.9, 2.1]);
    println!("\nd = 3: u(2θ) = {:.12}, mean coefficient at η = 1: {:.12}", w.eval(2.0, &x), w.mean_coefficient(1.0).unwrap());
}
