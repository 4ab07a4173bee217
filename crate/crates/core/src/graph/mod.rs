//! Undirected simple graphs and the topology generators.

mod generators;
mod io;
mod lfr;

use std::collections::VecDeque;

pub use generators::{generate_ba, generate_complete, generate_er};
pub use io::{read_communities, read_edge_list, write_communities, write_edge_list};
pub use lfr::{generate_lfr, LfrParams};

use crate::error::{invalid, Result};

/// Undirected simple graph in compressed adjacency form.
///
/// Node ids are dense `0..n`. Neighbour lists are sorted ascending, so the
/// adjacency of every node can be binary-searched. Optional community labels
/// assign exactly one community id to each node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    community: Option<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints. Edge orientation is irrelevant.
    pub fn from_edges(n: usize, edges: &[(u32, u32)], community: Option<Vec<u32>>) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(invalid(format!("node count {n} exceeds u32 range")));
        }
        let mut canon: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a as usize >= n || b as usize >= n {
                return Err(invalid(format!("edge ({a}, {b}) out of range for n={n}")));
            }
            if a == b {
                return Err(invalid(format!("self-loop on node {a}")));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        if let Some(labels) = &community {
            if labels.len() != n {
                return Err(invalid(format!(
                    "community labels cover {} nodes, graph has {n}",
                    labels.len()
                )));
            }
        }

        let mut degree = vec![0usize; n];
        for &(a, b) in &canon {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        for &(a, b) in &canon {
            neighbors[fill[a as usize]] = b;
            fill[a as usize] += 1;
            neighbors[fill[b as usize]] = a;
            fill[b as usize] += 1;
        }
        for i in 0..n {
            neighbors[offsets[i]..offsets[i + 1]].sort_unstable();
        }

        Ok(Self {
            n,
            edges: canon,
            offsets,
            neighbors,
            community,
        })
    }

    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_edges(n, &[], None).expect("edgeless graph is always valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// CSR row offsets, length `n + 1`.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    pub fn communities(&self) -> Option<&[u32]> {
        self.community.as_deref()
    }

    pub fn community_of(&self, i: usize) -> Option<u32> {
        self.community.as_ref().map(|c| c[i])
    }

    /// Number of distinct community ids (`max + 1`), or 0 without labels.
    pub fn community_count(&self) -> usize {
        self.community
            .as_ref()
            .and_then(|c| c.iter().max())
            .map_or(0, |&m| m as usize + 1)
    }

    /// Member count per community id.
    pub fn community_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.community_count()];
        if let Some(labels) = &self.community {
            for &c in labels {
                sizes[c as usize] += 1;
            }
        }
        sizes
    }

    /// Attaches (or replaces) community labels.
    pub fn with_communities(mut self, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(invalid(format!(
                "community labels cover {} nodes, graph has {}",
                labels.len(),
                self.n
            )));
        }
        self.community = Some(labels);
        Ok(self)
    }

    /// Fraction of each node's edges that leave its community. Nodes without
    /// edges report 0. `None` when the graph is unlabelled.
    pub fn mixing_fractions(&self) -> Option<Vec<f64>> {
        let labels = self.community.as_ref()?;
        Some(
            (0..self.n)
                .map(|i| {
                    let nb = self.neighbors(i);
                    if nb.is_empty() {
                        return 0.0;
                    }
                    let out = nb.iter().filter(|&&j| labels[j as usize] != labels[i]).count();
                    out as f64 / nb.len() as f64
                })
                .collect(),
        )
    }

    /// Connected component id per node, numbered in order of first node.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        let mut next = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    let v = v as usize;
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn degree_stats(&self) -> DegreeStats {
        degree_stats(self)
    }
}

/// Summary of the degree sequence and connectivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub avg_degree: f64,
    pub min_degree: usize,
    pub max_degree: usize,
    pub n_components: usize,
}

pub fn degree_stats(g: &Graph) -> DegreeStats {
    let degrees = (0..g.n()).map(|i| g.degree(i));
    let n_components = g.components().into_iter().max().map_or(0, |m| m + 1);
    DegreeStats {
        avg_degree: if g.n() == 0 {
            0.0
        } else {
            2.0 * g.edge_count() as f64 / g.n() as f64
        },
        min_degree: degrees.clone().min().unwrap_or(0),
        max_degree: degrees.max().unwrap_or(0),
        n_components,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(Graph::from_edges(3, &[(1, 1)], None).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)], None).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)], None).is_err());
        assert!(Graph::from_edges(3, &[(0, 1)], Some(vec![0, 1])).is_err());
    }

    #[test]
    fn adjacency_is_symmetric_and_sorted() {
        let g = Graph::from_edges(4, &[(2, 0), (0, 1), (3, 0), (1, 2)], None).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert_eq!(g.neighbors(2), &[0, 1]);
        assert!(g.has_edge(3, 0) && g.has_edge(0, 3));
        assert!(!g.has_edge(1, 3));
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (0, 3), (1, 2)]);
    }

    #[test]
    fn stats_on_complete_and_empty() {
        let s = generate_complete(5).unwrap().degree_stats();
        assert_eq!(s.avg_degree, 4.0);
        assert_eq!(s.n_components, 1);
        assert_eq!((s.min_degree, s.max_degree), (4, 4));

        let s = Graph::empty(5).degree_stats();
        assert_eq!(s.avg_degree, 0.0);
        assert_eq!(s.n_components, 5);
    }

    #[test]
    fn mixing_fraction_counts_outside_edges() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)], Some(vec![0, 0, 1, 1])).unwrap();
        assert_eq!(g.mixing_fractions().unwrap(), vec![0.0, 0.5, 0.5, 0.0]);
        assert_eq!(g.community_sizes(), vec![2, 2]);
    }
}
