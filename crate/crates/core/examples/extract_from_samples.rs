//! Sample |u|² on a polar grid and recover Re c_{m,n} from the samples.

use std::time::Instant;

use herglotz::extract::*;
use herglotz::field::*;

fn main() {
    let u = FieldGenerator::new(5).generate_seeded(HerglotzField::fourier_basis(5), 3).unwrap();
    let (radii, grid) = sampling_grid(2, 5, None, None, None).unwrap();
    let samples = sample_magnitude_grid(&u, &radii, &grid);
    println!("{} radii on (0, {:.2}], {} angles", radii.len(), radii.last().unwrap(), grid.len());

    let exact = magnitude_coeffs(&u, None);
    for method in [UnmixMethod::LeastSquares, UnmixMethod::Taylor] {
        let t = Instant::now();
        let x = extract_magnitude_data(&samples, None, method).unwrap();
        println!(
            "{:>14}: degree {} | error {:.2e} | residual {:.2e} | condition {:.2e} | {:.0?}",
            method.name(),
            x.data.max_degree,
            x.data.deviation(&exact).unwrap() / exact.scale(),
            x.residual,
            x.condition,
            t.elapsed()
        );
    }

    // the unknowns behind one angular frequency
    let profiles = angular_decompose(&samples).unwrap();
    let r = radial_unmix(&profiles[4], 5, UnmixMethod::LeastSquares).unwrap();
    for (p, c) in r.pairs.iter().zip(&r.coefficients) {
        println!("frequency 4 ← pair ({}, {}): {:.12}", p.0, p.1, c);
    }
}
