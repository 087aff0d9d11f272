// ℓp spanners: the size search for p ∈ (1, 2) and the resulting
// certificates for several norms.
//
//     cargo run --example lp_spanner

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spanvol::preprocess;
use spanvol::spanner::{build_spanner, default_size, lp_size_criterion, lp_spanner_size};

pub fn run_example() -> spanvol::Result<Vec<(f64, usize, f64)>> {
    let d = 4;
    println!("size criterion r^(2/p-1) * 2d/(r-d+1) for p = 1.5, d = {d}:");
    for r in [20, 24, 26, 27, 28, 32] {
        println!("  r = {r:>2}: {:.6}", lp_size_criterion(d, r, 1.5));
    }
    println!("smallest admissible r: {:?}", lp_spanner_size(d, 1.5));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let raw = DMatrix::from_fn(500, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let points = preprocess(&raw, None)?;

    let mut rows = Vec::new();
    println!("\n    p     r   c_achieved  c_guaranteed");
    for p in [1.0, 1.25, 1.5, 1.75, 2.0, f64::INFINITY] {
        let cert = build_spanner(&points, p, None)?;
        cert.verify(&points)?;
        assert_eq!(
            Some(cert.r),
            default_size(p, d).map(|r| r.min(points.len()))
        );
        println!(
            "{p:>5} {:>5} {:>12.6} {:>13.6}",
            cert.r, cert.c_achieved, cert.c_guaranteed
        );
        rows.push((p, cert.r, cert.c_achieved));
    }
    Ok(rows)
}

fn main() -> spanvol::Result<()> {
    run_example().map(drop)
}
