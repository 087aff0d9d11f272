// The MVEE solver on its own: primal ellipsoid, dual weights and the
// duality gap.
//
//     cargo run --example mvee_solver

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spanvol::mvee::{default_max_iter, dual_bound, khachiyan_mvee};
use spanvol::{preprocess, PointSet};

pub fn run_example() -> spanvol::Result<f64> {
    // standard basis: H = dI and the bound is attained by uniform weights
    let d = 3;
    let basis = PointSet::from_rows(&[
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
    ])?;
    let e = khachiyan_mvee(&basis, 1e-9, 1000)?;
    println!("basis: H diagonal {:?}", e.h.diagonal().as_slice());
    println!(
        "-ln det H = {:.9}, dual bound at uniform weights = {:.9}, -d ln d = {:.9}",
        e.neg_logdet,
        dual_bound(&basis, &[1.0 / 3.0; 3])?,
        -(d as f64) * (d as f64).ln()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (n, d) = (1000, 8);
    let raw = DMatrix::from_fn(n, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let points = preprocess(&raw, None)?;
    let tol = 1e-7;
    let e = khachiyan_mvee(&points, tol, default_max_iter(d, n, tol))?;
    let support = e.lambda.iter().filter(|&&l| l > 0.0).count();
    let gap = e.neg_logdet - e.dual_bound;
    println!(
        "gaussian n={n}, d={d}: {} iterations, {support} points carry weight",
        e.iterations
    );
    println!(
        "max violation {:.2e}, duality gap {gap:.3e} <= d ln(1+tol) = {:.3e}",
        e.max_violation,
        d as f64 * tol.ln_1p()
    );
    Ok(gap)
}

fn main() -> spanvol::Result<()> {
    run_example().map(drop)
}
