//! LFR benchmark graphs: power-law degrees, power-law community sizes and a
//! per-node mixing target, realised by stub matching plus degree-preserving
//! rewiring.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{invalid, Error, Result};
use crate::{rng_from_seed, SimRng};

/// LFR generator parameters.
///
/// `mu_mix` is the fraction of each node's edges that leave its community.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LfrParams {
    pub n: usize,
    /// Degree-distribution exponent.
    pub tau1: f64,
    /// Community-size exponent.
    pub tau2: f64,
    pub mu_mix: f64,
    pub avg_deg: f64,
    pub min_comm: usize,
    /// Largest community size; defaults to `n`.
    #[serde(default)]
    pub max_comm: Option<usize>,
    /// Largest degree; defaults to `n / 10`.
    #[serde(default)]
    pub max_degree: Option<usize>,
    #[serde(default = "default_rewire_sweeps")]
    pub rewire_sweeps: usize,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: usize,
}

fn default_rewire_sweeps() -> usize {
    100
}

fn default_max_attempts() -> usize {
    20
}

impl LfrParams {
    pub fn new(n: usize, tau1: f64, tau2: f64, mu_mix: f64, avg_deg: f64, min_comm: usize) -> Self {
        Self {
            n,
            tau1,
            tau2,
            mu_mix,
            avg_deg,
            min_comm,
            max_comm: None,
            max_degree: None,
            rewire_sweeps: default_rewire_sweeps(),
            max_attempts: default_max_attempts(),
        }
    }

    /// The 250-node mesoscale configuration: `tau1 = 3`, `tau2 = 1.5`,
    /// `<k> = 10`, communities of at least 50 nodes. Community sizes are capped
    /// at `n / 4`, which makes the greedy partition come out as four blocks of
    /// similar size.
    pub fn mesoscale(mu_mix: f64) -> Self {
        Self {
            max_comm: Some(62),
            ..Self::new(250, 3.0, 1.5, mu_mix, 10.0, 50)
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(invalid(format!("LFR needs n >= 2, got {}", self.n)));
        }
        if !(self.tau1 > 1.0) || !(self.tau2 > 1.0) {
            return Err(invalid(format!(
                "LFR exponents must exceed 1, got tau1={}, tau2={}",
                self.tau1, self.tau2
            )));
        }
        if !(self.mu_mix > 0.0 && self.mu_mix < 1.0) {
            return Err(invalid(format!("mixing parameter {} outside (0, 1)", self.mu_mix)));
        }
        if !(self.avg_deg > 0.0) {
            return Err(invalid(format!("average degree {} must be positive", self.avg_deg)));
        }
        if self.min_comm == 0 || self.min_comm > self.n {
            return Err(invalid(format!(
                "minimum community size {} outside [1, n={}]",
                self.min_comm, self.n
            )));
        }
        if 2 * self.min_comm > self.n {
            return Err(Error::GenerationInfeasible(format!(
                "cannot split n={} into at least two communities of size >= {}",
                self.n, self.min_comm
            )));
        }
        if let Some(max) = self.max_comm {
            if max < self.min_comm {
                return Err(invalid(format!(
                    "max community size {max} below minimum {}",
                    self.min_comm
                )));
            }
        }
        Ok(())
    }
}

/// Discrete power law `P(k) ∝ k^-exponent` on `[low, high]`.
#[derive(Debug, Clone)]
struct PowerLaw {
    low: usize,
    cdf: Vec<f64>,
}

impl PowerLaw {
    fn new(exponent: f64, low: usize, high: usize) -> Self {
        let mut acc = 0.0;
        let cdf = (low..=high)
            .map(|k| {
                acc += (k as f64).powf(-exponent);
                acc
            })
            .collect();
        Self { low, cdf }
    }

    fn mean(&self) -> f64 {
        let mut prev = 0.0;
        let mut weighted = 0.0;
        for (i, &c) in self.cdf.iter().enumerate() {
            weighted += (self.low + i) as f64 * (c - prev);
            prev = c;
        }
        weighted / prev
    }

    fn sample(&self, rng: &mut SimRng) -> usize {
        let total = *self.cdf.last().unwrap();
        let u = rng.random::<f64>() * total;
        let idx = self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1);
        self.low + idx
    }
}

/// Picks the integer lower cutoff whose truncated power-law mean is closest
/// to `target`.
fn degree_law(exponent: f64, target: f64, k_max: usize) -> Result<PowerLaw> {
    let (law, mean) = (1..=k_max)
        .map(|k_min| {
            let law = PowerLaw::new(exponent, k_min, k_max);
            let mean = law.mean();
            (law, mean)
        })
        .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
        .expect("k_max >= 1");
    if (mean - target).abs() > 0.05 * target {
        return Err(Error::GenerationInfeasible(format!(
            "no lower degree cutoff gives mean {target} with exponent {exponent} and max degree {k_max} \
             (closest mean {mean:.3})"
        )));
    }
    Ok(law)
}

fn sample_degrees(law: &PowerLaw, n: usize, target: f64, k_max: usize, rng: &mut SimRng) -> Option<Vec<usize>> {
    for _ in 0..100 {
        let mut deg: Vec<usize> = (0..n).map(|_| law.sample(rng)).collect();
        if deg.iter().sum::<usize>() % 2 == 1 {
            // Make the stub count even.
            match deg.iter().position(|&d| d < k_max) {
                Some(i) => deg[i] += 1,
                None => deg[0] -= 1,
            }
        }
        let mean = deg.iter().sum::<usize>() as f64 / n as f64;
        if (mean - target).abs() <= 0.05 * target {
            return Some(deg);
        }
    }
    None
}

/// Greedy fill: draw sizes while at least `min_comm` nodes remain unassigned,
/// then spread the leftover over the drawn blocks by largest remainder.
fn sample_community_sizes(law: &PowerLaw, n: usize, min_comm: usize, rng: &mut SimRng) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut remaining = n;
    while remaining >= min_comm {
        let s = law.sample(rng).min(remaining);
        sizes.push(s);
        remaining -= s;
    }
    if remaining > 0 {
        let total: usize = sizes.iter().sum();
        let shares: Vec<f64> = sizes.iter().map(|&s| remaining as f64 * s as f64 / total as f64).collect();
        let mut added: Vec<usize> = shares.iter().map(|x| x.floor() as usize).collect();
        let mut left = remaining - added.iter().sum::<usize>();
        let mut order: Vec<usize> = (0..sizes.len()).collect();
        // Largest fractional part first, ties to the lower index.
        order.sort_by(|&a, &b| {
            let fa = shares[a] - added[a] as f64;
            let fb = shares[b] - added[b] as f64;
            fb.total_cmp(&fa).then(a.cmp(&b))
        });
        for &i in order.iter().cycle() {
            if left == 0 {
                break;
            }
            added[i] += 1;
            left -= 1;
        }
        for (s, a) in sizes.iter_mut().zip(added) {
            *s += a;
        }
    }
    sizes
}

#[inline]
fn key(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

/// Multiset of undirected edges.
#[derive(Default)]
struct EdgeBook {
    counts: HashMap<(u32, u32), u32>,
}

impl EdgeBook {
    fn count(&self, a: u32, b: u32) -> u32 {
        self.counts.get(&key(a, b)).copied().unwrap_or(0)
    }

    fn add(&mut self, a: u32, b: u32) {
        *self.counts.entry(key(a, b)).or_insert(0) += 1;
    }

    fn remove(&mut self, a: u32, b: u32) {
        let k = key(a, b);
        let c = self.counts.get_mut(&k).expect("edge present");
        *c -= 1;
        if *c == 0 {
            self.counts.remove(&k);
        }
    }
}

/// Degree-preserving double-edge swaps that remove self-loops, multi-edges and
/// pairs rejected by `allowed`. Returns the number of offending edges left.
fn rewire(
    edges: &mut [(u32, u32)],
    book: &mut EdgeBook,
    allowed: impl Fn(u32, u32) -> bool,
    sweeps: usize,
    rng: &mut SimRng,
) -> usize {
    let is_bad = |e: (u32, u32), book: &EdgeBook| e.0 == e.1 || !allowed(e.0, e.1) || book.count(e.0, e.1) > 1;
    for _ in 0..sweeps {
        let bad: Vec<usize> = (0..edges.len()).filter(|&i| is_bad(edges[i], book)).collect();
        if bad.is_empty() {
            return 0;
        }
        for idx in bad {
            if !is_bad(edges[idx], book) {
                continue;
            }
            let other = rng.random_range(0..edges.len());
            if other == idx {
                continue;
            }
            let (a, b) = edges[idx];
            let (mut x, mut y) = edges[other];
            if rng.random::<bool>() {
                std::mem::swap(&mut x, &mut y);
            }
            if a == x || b == y || !allowed(a, x) || !allowed(b, y) || key(a, x) == key(b, y) {
                continue;
            }
            book.remove(a, b);
            book.remove(x, y);
            if book.count(a, x) > 0 || book.count(b, y) > 0 {
                book.add(a, b);
                book.add(x, y);
                continue;
            }
            book.add(a, x);
            book.add(b, y);
            edges[idx] = (a, x);
            edges[other] = (b, y);
        }
    }
    edges.iter().filter(|&&e| is_bad(e, book)).count()
}

fn match_stubs(stubs: &mut Vec<u32>, rng: &mut SimRng) -> Vec<(u32, u32)> {
    stubs.shuffle(rng);
    stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect()
}

/// Generates an LFR benchmark graph with community labels.
pub fn generate_lfr(params: &LfrParams, seed: u64) -> Result<Graph> {
    params.validate()?;
    let n = params.n;
    let k_max = params.max_degree.unwrap_or(n / 10).clamp(1, n - 1);
    let max_comm = params.max_comm.unwrap_or(n).min(n);
    let degree_law = degree_law(params.tau1, params.avg_deg, k_max)?;
    let size_law = PowerLaw::new(params.tau2, params.min_comm, max_comm);
    let mut rng = rng_from_seed(seed);

    let mut diagnostics = Vec::new();
    for attempt in 0..params.max_attempts.max(1) {
        match lfr_attempt(params, &degree_law, &size_law, k_max, &mut rng) {
            Ok(g) => return Ok(g),
            Err(why) => {
                log::debug!("LFR attempt {attempt} failed: {why}");
                diagnostics.push(why);
            }
        }
    }
    Err(Error::GenerationFailed {
        attempts: params.max_attempts.max(1),
        diagnostics: diagnostics.join("; "),
    })
}

fn lfr_attempt(
    params: &LfrParams,
    degree_law: &PowerLaw,
    size_law: &PowerLaw,
    k_max: usize,
    rng: &mut SimRng,
) -> std::result::Result<Graph, String> {
    let n = params.n;
    let degree = sample_degrees(degree_law, n, params.avg_deg, k_max, rng)
        .ok_or_else(|| "degree sequence mean kept missing the target".to_string())?;
    let sizes = sample_community_sizes(size_law, n, params.min_comm, rng);
    if sizes.len() < 2 {
        return Err(format!("partition produced a single community of size {}", sizes[0]));
    }

    let mut external: Vec<usize> = degree
        .iter()
        .map(|&d| {
            let x = params.mu_mix * d as f64;
            let base = x.floor();
            base as usize + usize::from(rng.random::<f64>() < x - base)
        })
        .collect();
    let mut internal: Vec<usize> = degree.iter().zip(&external).map(|(d, e)| d - e).collect();

    // Hardest-to-place nodes first; shuffle so ties are broken randomly.
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order.sort_by(|&a, &b| internal[b].cmp(&internal[a]));
    let mut free = sizes.clone();
    let mut label = vec![0u32; n];
    for &v in &order {
        let total: usize = (0..sizes.len()).filter(|&c| sizes[c] > internal[v]).map(|c| free[c]).sum();
        if total == 0 {
            return Err(format!("no community can host node {v} with internal degree {}", internal[v]));
        }
        let mut r = rng.random_range(0..total);
        let c = (0..sizes.len())
            .filter(|&c| sizes[c] > internal[v])
            .find(|&c| {
                if r < free[c] {
                    true
                } else {
                    r -= free[c];
                    false
                }
            })
            .expect("weighted pick lands in a community");
        free[c] -= 1;
        label[v] = c as u32;
    }

    let mut members: Vec<Vec<u32>> = vec![Vec::new(); sizes.len()];
    for v in 0..n {
        members[label[v] as usize].push(v as u32);
    }
    for (c, group) in members.iter().enumerate() {
        let stubs: usize = group.iter().map(|&v| internal[v as usize]).sum();
        if stubs % 2 == 1 {
            let v = group
                .iter()
                .map(|&v| v as usize)
                .find(|&v| internal[v] > 0 && external[v] < n - sizes[c])
                .ok_or_else(|| format!("cannot fix internal stub parity in community {c}"))?;
            internal[v] -= 1;
            external[v] += 1;
        }
    }
    let ext_by_comm: Vec<usize> = members
        .iter()
        .map(|g| g.iter().map(|&v| external[v as usize]).sum())
        .collect();
    let ext_total: usize = ext_by_comm.iter().sum();
    if let Some(c) = (0..sizes.len()).find(|&c| 2 * ext_by_comm[c] > ext_total) {
        return Err(format!(
            "community {c} holds {} of {ext_total} external stubs",
            ext_by_comm[c]
        ));
    }

    let mut book = EdgeBook::default();
    let mut all_edges: Vec<(u32, u32)> = Vec::with_capacity(degree.iter().sum::<usize>() / 2);
    for (c, group) in members.iter().enumerate() {
        let mut stubs: Vec<u32> = group
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, internal[v as usize]))
            .collect();
        let mut edges = match_stubs(&mut stubs, rng);
        for &(a, b) in &edges {
            book.add(a, b);
        }
        let left = rewire(&mut edges, &mut book, |_, _| true, params.rewire_sweeps, rng);
        if left > 0 {
            return Err(format!("{left} intra-community conflicts left in community {c}"));
        }
        all_edges.extend(edges);
    }

    let mut stubs: Vec<u32> = (0..n as u32)
        .flat_map(|v| std::iter::repeat_n(v, external[v as usize]))
        .collect();
    let mut edges = match_stubs(&mut stubs, rng);
    for &(a, b) in &edges {
        book.add(a, b);
    }
    let left = rewire(
        &mut edges,
        &mut book,
        |a, b| label[a as usize] != label[b as usize],
        params.rewire_sweeps,
        rng,
    );
    if left > 0 {
        return Err(format!("{left} inter-community conflicts left"));
    }
    all_edges.extend(edges);

    Graph::from_edges(n, &all_edges, Some(label)).map_err(|e| e.to_string())
}
