//! Text formats: field descriptors, magnitude data and sample grids.

use herglotz::field::io::*;
use herglotz::field::*;
use herglotz::harmonics::*;

fn main() {
    let basis = std::sync::Arc::new(Basis::new(BasisSpec::zonal_seeded(3, 2, 9, Normalization::Raw).unwrap(), 2).unwrap());
    let u = FieldGenerator::new(2).generate_seeded(basis, 9).unwrap();
    let text = write_field(&u);
    print!("{}", text.lines().take(9).map(|l| format!("{l}\n")).collect::<String>());
    let back = parse_field(&text).unwrap();
    println!("... round trip exact: {}", back.flat() == u.flat());

    let data = magnitude_coeffs(&u, None);
    let again = parse_magnitude_data(&write_magnitude_data(&data)).unwrap();
    println!("magnitude data round trip exact: {}", again == data);

    let w = FieldGenerator::new(2).generate_seeded(HerglotzField::fourier_basis(2), 1).unwrap();
    let g = sample_magnitude_grid(&w, &chebyshev_radii(3, 4.0), &SphereGrid::new(2, 6).unwrap());
    print!("{}", write_grid(&g).lines().take(4).map(|l| format!("{l}\n")).collect::<String>());

    match parse_field("format = herglotz-field/1\ndim = 2\nmax_degree = 1\nbasis = fourier2d\nnormalization = raw\ncoeff 1 3 0 0\n") {
        Err(e) => println!("bad file: {e}"),
        Ok(_) => unreachable!(),
    }
}
