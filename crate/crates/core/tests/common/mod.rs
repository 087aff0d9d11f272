#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spanvol::points::{preprocess, PointSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(n: usize, d: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(n, d, |_, _| rng.sample(StandardNormal))
}

/// `n` standard Gaussian points in `d` dimensions.
pub fn gaussian_points(n: usize, d: usize, seed: u64) -> PointSet {
    preprocess(&gaussian_matrix(n, d, &mut rng(seed)), None).unwrap()
}

/// Gaussian points with per-coordinate scales spread over two decades, so
/// the greedy start is far from optimal.
pub fn skewed_points(n: usize, d: usize, seed: u64) -> PointSet {
    let mut r = rng(seed);
    let scales: Vec<f64> = (0..d)
        .map(|_| 10f64.powf(r.random_range(-1.0..1.0)))
        .collect();
    let m = gaussian_matrix(n, d, &mut r);
    preprocess(&DMatrix::from_fn(n, d, |i, c| m[(i, c)] * scales[c]), None).unwrap()
}

/// Determinant by cofactor expansion; used as an oracle for tiny matrices.
pub fn det_cofactor(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    match n {
        0 => 1.0,
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => (0..n)
            .map(|c| {
                let minor = m.clone().remove_row(0).remove_column(c);
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[(0, c)] * det_cofactor(&minor)
            })
            .sum(),
    }
}

/// `Σ counts_i v_i v_iᵀ` by explicit loops over coordinates.
pub fn gram_naive(points: &PointSet, counts: &[usize]) -> DMatrix<f64> {
    let d = points.dim();
    let mut m = DMatrix::zeros(d, d);
    for (i, &c) in counts.iter().enumerate() {
        let v = points.point(i);
        for a in 0..d {
            for b in 0..d {
                m[(a, b)] += c as f64 * v[a] * v[b];
            }
        }
    }
    m
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
