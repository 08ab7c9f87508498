//! Harmonic polynomials p_α, zonal harmonics and the dimension N(m).

use herglotz::harmonics::*;
use herglotz::specfun::gegenbauer;

fn main() {
    for d in [2, 3, 4] {
        let dims: Vec<usize> = (0..6).map(|m| harmonic_dim(d, m)).collect();
        println!("d = {d}: N(0..6) = {dims:?}");
    }

    // p_α is harmonic and differs from x^α by a multiple of |x|²
    let d = 3;
    for a in palpha_indices(d, 3) {
        let p = p_alpha(&a, d).unwrap();
        println!("α = {:?}: Δp = 0 ? {}, degree {:?}", a.as_slice(), laplacian(&p).is_zero(), p.degree());
    }

    // zonal harmonic C_m^{1/2}(⟨θ, ζ⟩) for d = 3 is a Legendre polynomial
    let zeta = [0.0, 0.0, 1.0];
    let theta = [0.6, 0.0, 0.8];
    let z = zonal_eval(2, 3, &zeta, &theta).unwrap();
    println!("\nzonal Y_2 at cos = 0.8: {z:.12} (P_2(0.8) = {:.12})", gegenbauer(2, 0.5, 0.8));

    let basis = Basis::new(BasisSpec::palpha(3, Normalization::Orthonormal).unwrap(), 2).unwrap();
    println!("orthonormalized degree-2 Gram matrix:{:.3}", basis.gram(2));
}
