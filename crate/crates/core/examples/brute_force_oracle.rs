// Exact determinant maximization by enumeration, compared with the greedy
// start and with the Cauchy–Binet expansion.
//
//     cargo run --example brute_force_oracle

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spanvol::engine::greedy_prefix;
use spanvol::experiments::{brute_force_max_det, cauchy_binet_sum};
use spanvol::points::gram_sum;
use spanvol::preprocess;

pub fn run_example() -> spanvol::Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (n, d) = (10, 3);
    let raw = DMatrix::from_fn(n, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let points = preprocess(&raw, None)?;

    let (best, best_det) = brute_force_max_det(&points, d)?;
    let greedy = greedy_prefix(&points)?;
    let mut counts = vec![0; n];
    for &i in &greedy {
        counts[i] = 1;
    }
    let greedy_det = gram_sum(&points, &counts)?.determinant();
    println!("optimal {d}-subset {best:?}: det {best_det:.6}");
    println!("greedy picks {greedy:?}: det {greedy_det:.6}");
    println!("ratio {:.4} (at most d! = 6)", best_det / greedy_det);

    let full = gram_sum(&points, &vec![1; n])?.determinant();
    let expansion = cauchy_binet_sum(&points)?;
    println!("det(sum v v^T) = {full:.9}, sum of squared {d}x{d} minors = {expansion:.9}");
    Ok(best_det / greedy_det)
}

fn main() -> spanvol::Result<()> {
    run_example().map(drop)
}
