//! One simulation on the complete graph, printing the metric trace.
//!
//! ```bash
//! cargo run -p algobias --example single_run -- 0.2 2.0 7 [max_iterations]
//! ```

use std::time::Instant;

use algobias::graph::generate_complete;
use algobias::opinion::run;
use algobias::{InitSpec, ModelParams};

fn main() -> algobias::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    let (epsilon, gamma, seed) = (arg(0, 0.3), arg(1, 1.0), arg(2, 7.0) as u64);

    let g = generate_complete(250)?;
    let params = ModelParams::new(epsilon, gamma, 0.5).with_max_iterations(arg(3, 1e5) as u64);
    let start = Instant::now();
    let result = run(&g, &InitSpec::uniform(), &params, seed)?;

    println!("epsilon={epsilon} gamma={gamma} seed={seed}");
    for s in result.trace.iter().step_by((result.trace.len() / 20).max(1)) {
        println!(
            "  iter {:>6}  C={:>8.3}  clusters={:>3}  dist={:.4}",
            s.iteration, s.participation, s.clusters, s.distance
        );
    }
    let last = result.final_sample();
    println!(
        "converged={} after {} iterations: C={:.3}, {} clusters, distance {:.4} ({:.2?})",
        result.converged,
        result.iterations_used,
        last.participation,
        last.clusters,
        last.distance,
        start.elapsed()
    );
    Ok(())
}
