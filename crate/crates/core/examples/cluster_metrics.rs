//! Cluster extraction, participation ratio and pairwise distance on a
//! hand-made opinion vector, or on a file given as the first argument.

use algobias::io::read_opinions;
use algobias::metrics::{avg_pairwise_distance, detect_clusters, participation_ratio, DEFAULT_CLUSTER_TOL};

fn main() -> algobias::Result<()> {
    let opinions = match std::env::args().nth(1) {
        Some(path) => read_opinions(path.as_ref())?,
        // Three clusters of 5, 3 and 2 agents.
        None => vec![0.1, 0.1, 0.101, 0.105, 0.11, 0.5, 0.5, 0.505, 0.9, 0.9],
    };
    let partition = detect_clusters(&opinions, DEFAULT_CLUSTER_TOL)?;
    for (k, members) in partition.clusters.iter().enumerate() {
        let values: Vec<f64> = members.iter().map(|&i| opinions[i]).collect();
        println!("cluster {k}: {} agents, opinions {values:?}", members.len());
    }
    println!("participation ratio C = {:.4}", participation_ratio(&partition));
    println!("average pairwise distance = {:.4}", avg_pairwise_distance(&opinions));
    Ok(())
}
