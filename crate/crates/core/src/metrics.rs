//! Observables of an opinion vector: opinion clusters, the cluster
//! participation ratio, the average pairwise distance and the equilibrium
//! test used to stop a run.

use crate::error::{invalid, Result};
use crate::graph::Graph;

/// Default gap that separates two opinion clusters.
pub const DEFAULT_CLUSTER_TOL: f64 = 0.01;

/// Absolute slack on the gap comparison, so that a gap that is `tol` in
/// decimal (e.g. `0.61 - 0.6`) does not cut because of binary rounding.
pub const GAP_SLACK: f64 = 1e-12;

/// Agents grouped into opinion clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterPartition {
    /// Member ids per cluster, clusters ordered by ascending opinion.
    pub clusters: Vec<Vec<usize>>,
    /// Fraction of the population in each cluster.
    pub sizes: Vec<f64>,
}

impl ClusterPartition {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

/// Sorts opinions and cuts wherever consecutive values differ by strictly
/// more than `cluster_tol` (plus [`GAP_SLACK`]).
pub fn detect_clusters(opinions: &[f64], cluster_tol: f64) -> Result<ClusterPartition> {
    if opinions.is_empty() {
        return Err(invalid("cannot cluster an empty opinion vector"));
    }
    if !(cluster_tol > 0.0) {
        return Err(invalid(format!("cluster tolerance {cluster_tol} must be positive")));
    }
    let mut order: Vec<usize> = (0..opinions.len()).collect();
    order.sort_by(|&a, &b| opinions[a].total_cmp(&opinions[b]).then(a.cmp(&b)));

    let mut clusters = vec![vec![order[0]]];
    for w in order.windows(2) {
        if opinions[w[1]] - opinions[w[0]] > cluster_tol + GAP_SLACK {
            clusters.push(Vec::new());
        }
        clusters.last_mut().unwrap().push(w[1]);
    }
    let n = opinions.len() as f64;
    let sizes = clusters.iter().map(|c| c.len() as f64 / n).collect();
    Ok(ClusterPartition { clusters, sizes })
}

/// Effective number of clusters, `(Σ c_i)^2 / Σ c_i^2`.
pub fn participation_ratio(partition: &ClusterPartition) -> f64 {
    participation_ratio_of(&partition.sizes)
}

/// Participation ratio of raw cluster sizes; the sizes need not be
/// normalised.
pub fn participation_ratio_of(sizes: &[f64]) -> f64 {
    let sum: f64 = sizes.iter().sum();
    let sq: f64 = sizes.iter().map(|c| c * c).sum();
    sum * sum / sq
}

/// Mean of `|x_i - x_j|` over all `N^2` ordered pairs, self-pairs included.
///
/// Computed in `O(N log N)` from the sorted gaps: the `k`-th gap is crossed
/// by `k (N - k)` unordered pairs. Every term is non-negative, so identical
/// opinions give exactly 0.
pub fn avg_pairwise_distance(opinions: &[f64]) -> f64 {
    let n = opinions.len();
    if n == 0 {
        return 0.0;
    }
    let mut sorted = opinions.to_vec();
    sorted.sort_by(f64::total_cmp);
    let half: f64 = sorted
        .windows(2)
        .enumerate()
        .map(|(k, w)| (w[1] - w[0]) * ((k + 1) * (n - k - 1)) as f64)
        .sum();
    2.0 * half / (n as f64 * n as f64)
}

/// True when no edge can still produce a visible opinion change: every edge
/// either spans more than `epsilon` or is closer than `conv_delta`.
pub fn is_converged(opinions: &[f64], g: &Graph, epsilon: f64, conv_delta: f64) -> bool {
    g.edges().iter().all(|&(u, v)| {
        let d = (opinions[u as usize] - opinions[v as usize]).abs();
        d > epsilon || d < conv_delta
    })
}

/// Participation ratio, raw cluster count and average pairwise distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub participation: f64,
    pub clusters: usize,
    pub distance: f64,
}

pub fn snapshot(opinions: &[f64], cluster_tol: f64) -> Result<Snapshot> {
    let p = detect_clusters(opinions, cluster_tol)?;
    Ok(Snapshot {
        participation: participation_ratio(&p),
        clusters: p.len(),
        distance: avg_pairwise_distance(opinions),
    })
}
