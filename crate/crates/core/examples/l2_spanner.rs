// Build an ℓ2 volumetric spanner for Gaussian points and audit its
// certificate.
//
//     cargo run --example l2_spanner

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spanvol::{build_spanner, preprocess, SpannerCertificate};

pub fn run_example() -> spanvol::Result<SpannerCertificate> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (n, d) = (200, 10);
    let raw = DMatrix::from_fn(n, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let points = preprocess(&raw, None)?;

    let cert = build_spanner(&points, 2.0, None)?;
    cert.verify(&points)?;

    println!(
        "selected {} of {n} points: {:?}",
        cert.subset.len(),
        cert.subset
    );
    println!("swaps: {} (cap {})", cert.iterations, cert.iteration_cap);
    println!(
        "largest candidate leverage {:.4} < bound {:.4}",
        cert.final_max_tau, cert.tau_bound
    );
    println!(
        "max ||alpha||_2 outside S = {:.4}, guaranteed <= {:.4}",
        cert.c_unselected, cert.c_guaranteed
    );
    println!("max reconstruction residual {:.2e}", cert.max_residual);
    Ok(cert)
}

fn main() -> spanvol::Result<()> {
    run_example().map(drop)
}
