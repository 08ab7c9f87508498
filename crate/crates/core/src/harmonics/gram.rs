use nalgebra::DMatrix;

use super::grid::SphereGrid;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL: f64 = 1e-10;

/// Rank of the Gram matrix of `functions` under the grid quadrature, and
/// its smallest singular value after normalizing to unit diagonal.
pub fn gram_rank<F: Fn(&[f64]) -> f64>(functions: &[F], grid: &SphereGrid) -> (usize, f64) {
    let cols: Vec<Vec<f64>> = functions.iter().map(|f| grid.nodes().iter().map(|x| f(x)).collect()).collect();
    gram_rank_sampled(&cols, grid)
}

/// As [`gram_rank`] for functions already sampled on the grid nodes.
pub fn gram_rank_sampled(columns: &[Vec<f64>], grid: &SphereGrid) -> (usize, f64) {
    let n = columns.len();
    if n == 0 {
        return (0, 0.0);
    }
    let w = grid.weights();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for k in i..n {
            let v: f64 = columns[i].iter().zip(&columns[k]).zip(w).map(|((a, b), w)| a * b * w).sum();
            g[(i, k)] = v;
            g[(k, i)] = v;
        }
    }
    let scale: Vec<f64> = (0..n).map(|i| if g[(i, i)] > 0.0 { 1.0 / g[(i, i)].sqrt() } else { 0.0 }).collect();
    for i in 0..n {
        for k in 0..n {
            g[(i, k)] *= scale[i] * scale[k];
        }
    }
    let sv = g.singular_values();
    let max = sv.max();
    let min = sv.min();
    let rank = sv.iter().filter(|&&s| s > RANK_TOL * max.max(1e-300)).count();
    (rank, min)
}
