#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use zeromode::{Configuration, Point};

pub fn random_centers(rng: &mut ChaCha8Rng, n: usize, min_separation: f64) -> Vec<Point> {
    loop {
        let centers: Vec<Point> = (0..n)
            .map(|_| std::array::from_fn(|_| rng.random_range(-1.5..1.5)))
            .collect();
        let ok = (0..n).all(|j| {
            (j + 1..n).all(|k| {
                let d: f64 = (0..3).map(|i| (centers[j][i] - centers[k][i]).powi(2)).sum::<f64>().sqrt();
                d >= min_separation
            })
        });
        if ok {
            return centers;
        }
    }
}

pub fn random_config(rng: &mut ChaCha8Rng, n: usize, alpha_range: std::ops::Range<f64>) -> Configuration {
    let centers = random_centers(rng, n, 0.3);
    let alphas = (0..n).map(|_| rng.random_range(alpha_range.clone())).collect();
    Configuration::new(centers, alphas).unwrap()
}

use zeromode::{CMatrix, C64};

pub fn random_complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Orthogonal projection onto a random `rank`-dimensional subspace of `Cⁿ`.
pub fn random_projection(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> CMatrix {
    if rank == 0 {
        return CMatrix::zeros(n, n);
    }
    let q = random_complex_matrix(rng, n, rank).qr().q();
    &q * q.adjoint()
}

/// A random `n×n` matrix with exactly one zero singular value.
pub fn random_singular_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let m = random_complex_matrix(rng, n, n);
    let mut svd = m.svd(true, true);
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    svd.singular_values[imin] = 0.0;
    svd.recompose().unwrap()
}
