use std::collections::{BTreeMap, BTreeSet};

use algobias::metrics::GAP_SLACK;

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Clusters as connected components of the "within tolerance" relation,
/// by brute-force union-find over all pairs.
pub fn union_find_clusters(x: &[f64], tol: f64) -> BTreeSet<BTreeSet<usize>> {
    let mut parent: Vec<usize> = (0..x.len()).collect();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if (x[i] - x[j]).abs() <= tol + GAP_SLACK {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups = BTreeMap::<usize, BTreeSet<usize>>::new();
    for i in 0..x.len() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().insert(i);
    }
    groups.into_values().collect()
}
