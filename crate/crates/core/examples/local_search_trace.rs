// Drive the swap search directly and watch the log-determinant climb, with
// and without repetitions and for both pivot rules.
//
//     cargo run --example local_search_trace

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spanvol::engine::{local_search, EngineConfig, Pivot, SearchMode};
use spanvol::preprocess;

pub fn run_example() -> spanvol::Result<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (n, d) = (300, 6);
    // badly scaled coordinates make the greedy start far from optimal
    let raw = DMatrix::from_fn(n, d, |_, k| {
        rng.sample::<f64, _>(StandardNormal) * 10f64.powi(k as i32 % 3 - 1)
    });
    let points = preprocess(&raw, None)?;

    let mut iterations = Vec::new();
    for (mode, r) in [(SearchMode::NoRepeat, 3 * d), (SearchMode::Repeat, 9 * d)] {
        for pivot in [Pivot::FirstImproving, Pivot::BestImproving] {
            let cfg = EngineConfig::new(r, 0.05, mode).with_pivot(pivot);
            let rep = local_search(&points, &cfg)?;
            let trace = &rep.logdet_trace;
            println!(
                "{mode:?}/{pivot:?}: r={r}, {} swaps (cap {}), ln det {:.3} -> {:.3}, max tau {:.4} < {:.4}",
                rep.iterations,
                rep.iteration_cap,
                trace[0],
                trace[trace.len() - 1],
                rep.final_max_tau,
                rep.tau_bound
            );
            iterations.push(rep.iterations);
        }
    }
    Ok(iterations)
}

fn main() -> spanvol::Result<()> {
    run_example().map(drop)
}
