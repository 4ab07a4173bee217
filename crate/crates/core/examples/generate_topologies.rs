//! Builds every supported topology and prints its degree statistics.
//!
//! ```bash
//! cargo run -p algobias --example generate_topologies -- 42
//! ```

use algobias::graph::{generate_ba, generate_complete, generate_er, generate_lfr, write_edge_list, Graph, LfrParams};

fn describe(name: &str, g: &Graph) {
    let s = g.degree_stats();
    println!(
        "{name:<14} n={} edges={:<6} avg_degree={:<7.3} degree range {}..{} components={}",
        g.n(),
        g.edge_count(),
        s.avg_degree,
        s.min_degree,
        s.max_degree,
        s.n_components
    );
}

fn main() -> algobias::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);

    describe("complete", &generate_complete(250)?);
    describe("er(0.1)", &generate_er(250, 0.1, seed)?);
    describe("ba(5)", &generate_ba(250, 5, seed)?);

    for mu in [0.1, 0.5, 0.9] {
        let g = generate_lfr(&LfrParams::mesoscale(mu), seed)?;
        describe(&format!("lfr(mu={mu})"), &g);
        let mixing = g.mixing_fractions().unwrap();
        let mean_mixing = mixing.iter().sum::<f64>() / mixing.len() as f64;
        println!("               communities {:?}, mean external fraction {mean_mixing:.3}", g.community_sizes());
    }

    let path = std::env::temp_dir().join("algobias-ba.edges");
    write_edge_list(&generate_ba(250, 5, seed)?, &path)?;
    println!("BA edge list written to {}", path.display());
    Ok(())
}
