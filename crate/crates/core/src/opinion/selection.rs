//! Biased partner selection.
//!
//! Agent `i` picks neighbour `j` with probability proportional to
//! `max(|x_i - x_j|, d_eps)^(-gamma)`. Sampling inverts the cumulative weight
//! on a single uniform draw. Weights are summed in fixed blocks of
//! [`BLOCK`] entries so that the cached sampler in
//! [`Simulation`](super::Simulation) and the direct path here see bitwise
//! identical partial sums.

use rand::Rng;

use crate::graph::Graph;
use crate::SimRng;

pub(crate) const BLOCK: usize = 16;

/// `d^(-gamma)` with fast paths for the common exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BiasKernel {
    Uniform,
    Inverse,
    InverseSquare,
    Power(f64),
}

impl BiasKernel {
    pub fn new(gamma: f64) -> Self {
        if gamma == 0.0 {
            Self::Uniform
        } else if gamma == 1.0 {
            Self::Inverse
        } else if gamma == 2.0 {
            Self::InverseSquare
        } else {
            Self::Power(gamma)
        }
    }

    /// Selection weight for opinion distance `distance`, clamped below at
    /// `d_eps`.
    #[inline]
    pub fn weight(self, distance: f64, d_eps: f64) -> f64 {
        let d = distance.max(d_eps);
        match self {
            Self::Uniform => 1.0,
            Self::Inverse => 1.0 / d,
            Self::InverseSquare => 1.0 / (d * d),
            // exp/ln is about 1.5x faster than powf at ~1e-15 relative error.
            Self::Power(g) => (-g * d.ln()).exp(),
        }
    }
}

#[inline]
pub(crate) fn block_sum(chunk: &[f64]) -> f64 {
    chunk.iter().sum()
}

#[inline]
pub(crate) fn uniform_index(u: f64, len: usize) -> usize {
    ((u * len as f64) as usize).min(len - 1)
}

/// Smallest index whose cumulative weight exceeds `u * total`.
///
/// `block_sums[b]` must equal `block_sum` of the `b`-th `BLOCK`-sized chunk of
/// `weights`, and `total` the sequential sum of `block_sums`.
#[inline]
pub(crate) fn invert_blocks(weights: &[f64], block_sums: &[f64], total: f64, u: f64) -> usize {
    let target = u * total;
    let mut acc = 0.0;
    let mut block = block_sums.len() - 1;
    for (b, &s) in block_sums.iter().enumerate() {
        if acc + s > target {
            block = b;
            break;
        }
        acc += s;
    }
    let start = block * BLOCK;
    let chunk = &weights[start..(start + BLOCK).min(weights.len())];
    for (k, &w) in chunk.iter().enumerate() {
        acc += w;
        if acc > target {
            return start + k;
        }
    }
    // Only reachable through rounding when `u` is within an ulp of 1.
    start + chunk.len() - 1
}

/// Cumulative inversion over a plain weight vector.
pub fn sample_weighted(weights: &[f64], u: f64) -> usize {
    let block_sums: Vec<f64> = weights.chunks(BLOCK).map(block_sum).collect();
    let total = block_sums.iter().sum();
    invert_blocks(weights, &block_sums, total, u)
}

/// Selection weights of `i`'s neighbours, in adjacency order.
pub fn selection_weights(opinions: &[f64], g: &Graph, i: usize, gamma: f64, d_eps: f64) -> Vec<f64> {
    let kernel = BiasKernel::new(gamma);
    let xi = opinions[i];
    g.neighbors(i)
        .iter()
        .map(|&j| kernel.weight((xi - opinions[j as usize]).abs(), d_eps))
        .collect()
}

/// Normalised selection probabilities of `i`'s neighbours, in adjacency
/// order. Empty when `i` has no neighbours.
pub fn selection_probabilities(opinions: &[f64], g: &Graph, i: usize, gamma: f64, d_eps: f64) -> Vec<f64> {
    let w = selection_weights(opinions, g, i, gamma, d_eps);
    let total: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|x| x / total).collect();
    debug_assert!(
        p.is_empty() || (p.iter().sum::<f64>() - 1.0).abs() <= 1e-12,
        "selection probabilities do not sum to 1"
    );
    p
}

/// Draws a partner for `i`. Always consumes exactly one uniform draw from
/// `rng`, including when `i` has no neighbours (then `None`).
pub fn select_partner(
    opinions: &[f64],
    g: &Graph,
    i: usize,
    gamma: f64,
    d_eps: f64,
    rng: &mut SimRng,
) -> Option<usize> {
    let u: f64 = rng.random();
    partner_from_uniform(opinions, g, i, gamma, d_eps, u)
}

pub(crate) fn partner_from_uniform(
    opinions: &[f64],
    g: &Graph,
    i: usize,
    gamma: f64,
    d_eps: f64,
    u: f64,
) -> Option<usize> {
    let nb = g.neighbors(i);
    if nb.is_empty() {
        return None;
    }
    let k = if BiasKernel::new(gamma) == BiasKernel::Uniform {
        uniform_index(u, nb.len())
    } else {
        sample_weighted(&selection_weights(opinions, g, i, gamma, d_eps), u)
    };
    Some(nb[k] as usize)
}
