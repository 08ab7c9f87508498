//! Phase retrieval in the plane: |u| determines u up to c·u or c·ū.

use herglotz::field::*;
use herglotz::retrieve::*;

fn show(label: &str, g: FieldGenerator, seed: u64) {
    let m = g.max_degree;
    let u = g.generate_seeded(HerglotzField::fourier_basis(m), seed).unwrap();
    let r = retrieve_2d(&magnitude_coeffs(&u, None), &RetrieveOptions::default()).unwrap();
    let t = trivially_equivalent(&r.field, &u, 1e-9).unwrap();
    let types: Vec<String> = r.modes.iter().map(|t| format!("{}:{}", t.m, t.flags())).collect();
    println!(
        "{label:<12} residual {:.1e}  class {:<19}  vs original: {:<10} modes {}",
        r.residual,
        r.class.name(),
        t.verdict.name(),
        types.join(" ")
    );
}

fn main() {
    show("mean", FieldGenerator::new(4), 1);
    show("zero mean", FieldGenerator { zero_mean: true, ..FieldGenerator::new(4) }, 2);
    show("all type R", FieldGenerator { all_r: true, ..FieldGenerator::new(4) }, 3);
    show("single mode", FieldGenerator { single_mode: true, ..FieldGenerator::new(4) }, 4);
    show("real", FieldGenerator { real: true, ..FieldGenerator::new(4) }, 5);

    // data that no field produces
    let u = FieldGenerator::new(3).generate_seeded(HerglotzField::fourier_basis(3), 6).unwrap();
    let mut bad = magnitude_coeffs(&u, None);
    bad.spectra.as_mut().unwrap()[pair_index(1, 2, 3)].high.re += 0.5;
    println!("edited data: {}", retrieve_2d(&bad, &RetrieveOptions::default()).unwrap_err());
}
