//! Squares of distinct basis functions stay linearly independent; squares of
//! zonal harmonics at antipodal poles coincide.

use herglotz::harmonics::*;

fn main() {
    for d in [3, 4] {
        let basis = Basis::new(BasisSpec::palpha(d, Normalization::Raw).unwrap(), 5).unwrap();
        for m in 1..=5 {
            let grid = SphereGrid::for_degree(d, 4 * m).unwrap();
            let cols: Vec<Vec<f64>> = (0..basis.count(m))
                .map(|j| grid.nodes().iter().map(|x| basis.eval_real(m, x).unwrap()[j].powi(2)).collect())
                .collect();
            let (rank, sv) = gram_rank_sampled(&cols, &grid);
            println!("d = {d}, m = {m}: rank {rank:>3} / N(m) = {:>3}, min σ {sv:.2e}", harmonic_dim(d, m));
        }
    }

    let grid = SphereGrid::for_degree(3, 8).unwrap();
    let sq = |z: [f64; 3]| move |x: &[f64]| zonal_eval(2, 3, &z, x).unwrap().powi(2);
    let (z, antipode, other) = ([0.48, 0.6, 0.64], [-0.48, -0.6, -0.64], [0.0, 0.0, 1.0]);
    println!("\nantipodal poles: rank {}", gram_rank(&[sq(z), sq(antipode)], &grid).0);
    println!("distinct poles:  rank {}", gram_rank(&[sq(z), sq(other)], &grid).0);
}
