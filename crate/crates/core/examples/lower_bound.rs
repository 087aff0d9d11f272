// Lower-bound certificates on random sign ensembles: coherence, held-out ℓ1
// certificates, and the subset size at which the ℓ1.5 certificate drops to 1.
//
//     cargo run --release --example lower_bound

use spanvol::experiments::{ensemble_report, lp_certificate, sign_ensemble, EnsembleReport};

pub fn run_example() -> spanvol::Result<(EnsembleReport, Option<usize>)> {
    let (n, d, seed) = (1000, 100, 1);
    let points = sign_ensemble(n, d, seed)?;
    let report = ensemble_report(&points, seed);
    println!("n={n}, d={d}, seed={seed}");
    println!(
        "coherence {:.4} = {:.3} * sqrt(ln n / d)",
        report.coherence, report.coherence_ratio
    );
    println!(
        "min held-out l1 certificate {:.4} vs sqrt(d / ln n) = {:.4}",
        report.min_l1_certificate, report.reference_scale
    );

    // d = 64, p = 1.5: worst certificate over held-out points as |S| grows
    let (n, d, p) = (1500, 64, 1.5);
    let points = sign_ensemble(n, d, seed)?;
    let held_out: Vec<usize> = (n - 50..n).collect();
    let mut crossover = None;
    println!("\nd={d}, p={p}: min lp certificate over 50 held-out points");
    for size in [4, 8, 16, 32, 64, 128, 256, 512, 1024, 1450] {
        let subset: Vec<usize> = (0..size).collect();
        let mut worst = f64::INFINITY;
        for &i in &held_out {
            worst = worst.min(lp_certificate(&points, &subset, i, p)?);
        }
        println!("  |S| = {size:>4}: {worst:.4}");
        if worst <= 1.0 && crossover.is_none() {
            crossover = Some(size);
        }
    }
    let scale = (d as f64 / (n as f64).ln()).powf(p / (2.0 * p - 2.0));
    println!("reference scale (d / ln n)^(p / (2p - 2)) = {scale:.1}");
    match crossover {
        Some(s) => println!("certificate first reaches 1 at |S| = {s}"),
        None => println!("certificate stays above 1 over the sweep"),
    }
    Ok((report, crossover))
}

fn main() -> spanvol::Result<()> {
    run_example().map(drop)
}
