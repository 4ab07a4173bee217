//! Community-correlated initial opinions on an LFR graph.
//!
//! Each of the four communities starts near its own mean (0.25, 0.5, 0.75,
//! 1.0). With a narrow confidence bound most communities keep their own
//! opinion; the run prints the mean opinion per community before and after.

use algobias::graph::{generate_lfr, Graph, LfrParams};
use algobias::opinion::{init_opinions, run};
use algobias::{InitSpec, ModelParams};

fn community_means(g: &Graph, x: &[f64]) -> Vec<f64> {
    let labels = g.communities().unwrap();
    let mut sum = vec![0.0; g.community_count()];
    let mut count = vec![0usize; g.community_count()];
    for (i, &c) in labels.iter().enumerate() {
        sum[c as usize] += x[i];
        count[c as usize] += 1;
    }
    sum.iter().zip(&count).map(|(s, &c)| s / c as f64).collect()
}

fn main() -> algobias::Result<()> {
    let mu_lfr = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.1);
    let g = generate_lfr(&LfrParams::mesoscale(mu_lfr), 3)?;
    let init = InitSpec::fixed_means(vec![0.25, 0.5, 0.75, 1.0], 0.01);
    let params = ModelParams::new(0.2, 0.0, 0.5);

    let start = init_opinions(&g, &init, 11)?;
    let result = run(&g, &init, &params, 11)?;
    let fmt = |v: Vec<f64>| v.iter().map(|m| format!("{m:.3}")).collect::<Vec<_>>().join(" ");
    println!("mu_lfr={mu_lfr}, communities {:?}", g.community_sizes());
    println!("initial community means: {}", fmt(community_means(&g, &start.opinions)));
    println!("final community means:   {}", fmt(community_means(&g, &result.final_opinions)));
    let last = result.final_sample();
    println!(
        "converged={} after {} iterations, C={:.3}, {} clusters",
        result.converged, result.iterations_used, last.participation, last.clusters
    );
    Ok(())
}
