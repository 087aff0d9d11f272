// An MVEE coreset from local search with repetitions, checked against the
// ellipsoid of the full point set.
//
//     cargo run --example mvee_coreset

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spanvol::mvee::{coreset_params, mvee_coreset, verify_coreset, CoresetVerification};
use spanvol::preprocess;

pub fn run_example() -> spanvol::Result<CoresetVerification> {
    let (n, d, eps) = (500, 5, 0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // anisotropic cloud: coordinate k is stretched by 2^k
    let raw = DMatrix::from_fn(n, d, |_, k| {
        rng.sample::<f64, _>(StandardNormal) * 2f64.powi(k as i32)
    });
    let points = preprocess(&raw, None)?;

    let (r, delta) = coreset_params(d, eps)?;
    println!("epsilon = {eps}: multiset size r = {r}, threshold delta = {delta:.5}");

    let coreset = mvee_coreset(&points, eps)?;
    println!(
        "support {} points after {} swaps; multiplicities {:?}",
        coreset.support.len(),
        coreset.iterations,
        coreset
            .support
            .iter()
            .map(|&i| coreset.counts[i])
            .collect::<Vec<_>>()
    );
    println!(
        "max v^T (sum lambda v v^T)^-1 v = {:.4} <= {:.4}",
        coreset.leverage_route_max, coreset.leverage_route_limit
    );

    let check = verify_coreset(&points, &coreset, eps, 1e-7)?;
    println!(
        "-ln det H: full {:.6}, coreset {:.6}; gap {:.6} <= d ln(1+eps) = {:.6}",
        check.neg_logdet_x, check.neg_logdet_t, check.gap, check.allowed_gap
    );
    Ok(check)
}

fn main() -> spanvol::Result<()> {
    run_example().map(drop)
}
