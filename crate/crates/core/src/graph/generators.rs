use rand::Rng;

use super::Graph;
use crate::error::{invalid, Result};
use crate::rng_from_seed;

/// Complete graph on `n >= 2` nodes.
pub fn generate_complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(invalid(format!("complete graph needs n >= 2, got {n}")));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges, None)
}

/// Erdős–Rényi `G(n, p)`.
///
/// Pairs are visited in lexicographic order `(u, v), u < v`, one uniform draw
/// each, so the edge set is a pure function of `(n, p, seed)`.
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges, None)
}

/// Barabási–Albert preferential attachment.
///
/// Starts from a complete graph on `k` nodes; every later node attaches `k`
/// edges to distinct existing nodes chosen with probability proportional to
/// their current degree. When all existing degrees are zero (only possible
/// for `k = 1`) the first target is chosen uniformly.
pub fn generate_ba(n: usize, k: usize, seed: u64) -> Result<Graph> {
    if k < 1 || k >= n {
        return Err(invalid(format!("BA needs 1 <= k < n, got k={k}, n={n}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(k * (k - 1) / 2 + (n - k) * k);
    // Each endpoint of each edge appears once: sampling an entry uniformly is
    // sampling a node proportionally to degree.
    let mut endpoint_pool: Vec<u32> = Vec::with_capacity(2 * edges.capacity());
    for u in 0..k as u32 {
        for v in u + 1..k as u32 {
            edges.push((u, v));
            endpoint_pool.push(u);
            endpoint_pool.push(v);
        }
    }

    let mut targets: Vec<u32> = Vec::with_capacity(k);
    for new in k as u32..n as u32 {
        targets.clear();
        while targets.len() < k {
            let t = if endpoint_pool.is_empty() {
                rng.random_range(0..new)
            } else {
                endpoint_pool[rng.random_range(0..endpoint_pool.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, new));
            endpoint_pool.push(t);
            endpoint_pool.push(new);
        }
    }
    Graph::from_edges(n, &edges, None)
}
