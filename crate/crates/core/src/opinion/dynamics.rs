use rand::Rng;

use super::mean_field::MeanField;
use super::selection::{block_sum, invert_blocks, partner_from_uniform, uniform_index, BiasKernel, BLOCK};
use super::{init_opinions_with, InitSpec, ModelParams, OpinionState, RunResult, TraceSample};
use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::metrics::{is_converged, snapshot};
use crate::{rng_from_seed, SimRng};

/// Bounded-confidence update of the pair `(i, j)`.
///
/// When `|x_i - x_j| <= epsilon` both agents move a fraction `mu` of the gap
/// towards each other, computed from the pre-update values, and `true` is
/// returned. Otherwise nothing changes.
#[inline]
pub fn interact(opinions: &mut [f64], i: usize, j: usize, epsilon: f64, mu: f64) -> bool {
    let (xi, xj) = (opinions[i], opinions[j]);
    if (xi - xj).abs() <= epsilon {
        opinions[i] = xi + mu * (xj - xi);
        opinions[j] = xj + mu * (xi - xj);
        true
    } else {
        false
    }
}

/// One iteration of `n` interaction attempts, computing selection weights
/// from scratch for every attempt.
///
/// Each attempt draws `i` uniformly, then one uniform for the partner. Returns
/// how many attempts passed the confidence gate. [`Simulation::step`]
/// produces bitwise identical results with cached weights.
pub fn step(state: &mut OpinionState, g: &Graph, params: &ModelParams, rng: &mut SimRng) -> usize {
    debug_assert_eq!(state.len(), g.n());
    let n = g.n();
    let mut changed = 0;
    for _ in 0..n {
        let i = rng.random_range(0..n);
        let u: f64 = rng.random();
        if let Some(j) = partner_from_uniform(&state.opinions, g, i, params.gamma, params.d_eps, u) {
            changed += usize::from(interact(&mut state.opinions, i, j, params.epsilon, params.mu));
        }
    }
    state.iteration += 1;
    changed
}

/// A single run of the dynamics on a fixed graph.
///
/// For `gamma > 0` the selection weight of every directed edge is cached,
/// together with per-node block sums and totals. An opinion change rewrites
/// only the weights touching the agents that moved; stale sums are rebuilt
/// when their row is next sampled.
///
/// On a complete graph with `gamma > 0` the default sampler instead groups
/// agents by opinion value. It draws from the same distribution with the
/// same draws per attempt, but orders candidates differently, so individual
/// trajectories differ from [`step`]. Use [`Simulation::with_adjacency`] when
/// bitwise agreement with [`step`] matters.
pub struct Simulation<'g> {
    graph: &'g Graph,
    params: ModelParams,
    kernel: BiasKernel,
    opinions: Vec<f64>,
    iteration: u64,
    rng: SimRng,
    sampler: Sampler,
}

enum Sampler {
    Uniform,
    Edges(WeightCache),
    Groups(MeanField),
}

struct WeightCache {
    weights: Vec<f64>,
    // Position of the reverse entry (j -> i) for each entry (i -> j).
    mirror: Vec<usize>,
    block_offsets: Vec<usize>,
    block_sums: Vec<f64>,
    totals: Vec<f64>,
    // Rows whose block sums are stale.
    dirty: Vec<bool>,
}

impl WeightCache {
    fn build(g: &Graph, opinions: &[f64], kernel: BiasKernel, d_eps: f64) -> Self {
        let offsets = g.offsets();
        let n = g.n();
        let mut mirror = vec![0usize; offsets[n]];
        let mut weights = vec![0.0; offsets[n]];
        for i in 0..n {
            for (k, &j) in g.neighbors(i).iter().enumerate() {
                let j = j as usize;
                let back = g.neighbors(j).binary_search(&(i as u32)).expect("symmetric adjacency");
                mirror[offsets[i] + k] = offsets[j] + back;
                weights[offsets[i] + k] = kernel.weight((opinions[i] - opinions[j]).abs(), d_eps);
            }
        }
        let mut block_offsets = Vec::with_capacity(n + 1);
        block_offsets.push(0);
        for i in 0..n {
            block_offsets.push(block_offsets[i] + g.degree(i).div_ceil(BLOCK));
        }
        let mut cache = Self {
            weights,
            mirror,
            block_sums: vec![0.0; block_offsets[n]],
            block_offsets,
            totals: vec![0.0; n],
            dirty: vec![false; n],
        };
        for i in 0..n {
            cache.resum_row(g, i);
        }
        cache
    }

    fn resum_row(&mut self, g: &Graph, i: usize) {
        let row = &self.weights[g.offsets()[i]..g.offsets()[i + 1]];
        let blocks = &mut self.block_sums[self.block_offsets[i]..self.block_offsets[i + 1]];
        for (b, chunk) in blocks.iter_mut().zip(row.chunks(BLOCK)) {
            *b = block_sum(chunk);
        }
        self.totals[i] = blocks.iter().sum();
    }

    /// Recomputes every weight touching `i` after its opinion moved. Row sums
    /// of `i` and its neighbours are rebuilt lazily on their next pick.
    fn refresh(&mut self, g: &Graph, opinions: &[f64], kernel: BiasKernel, d_eps: f64, i: usize) {
        let offsets = g.offsets();
        let xi = opinions[i];
        for (k, &j) in g.neighbors(i).iter().enumerate() {
            let j = j as usize;
            let w = kernel.weight((xi - opinions[j]).abs(), d_eps);
            let at = offsets[i] + k;
            self.weights[at] = w;
            self.weights[self.mirror[at]] = w;
            self.dirty[j] = true;
        }
        self.dirty[i] = true;
    }

    #[inline]
    fn pick(&mut self, g: &Graph, i: usize, u: f64) -> usize {
        if self.dirty[i] {
            self.resum_row(g, i);
            self.dirty[i] = false;
        }
        let offsets = g.offsets();
        invert_blocks(
            &self.weights[offsets[i]..offsets[i + 1]],
            &self.block_sums[self.block_offsets[i]..self.block_offsets[i + 1]],
            self.totals[i],
            u,
        )
    }
}

impl<'g> Simulation<'g> {
    pub fn new(graph: &'g Graph, state: OpinionState, params: ModelParams, rng: SimRng) -> Result<Self> {
        Self::build(graph, state, params, rng, true)
    }

    /// Like [`Simulation::new`] but always samples over the adjacency lists,
    /// matching [`step`] bitwise on every graph.
    pub fn with_adjacency(graph: &'g Graph, state: OpinionState, params: ModelParams, rng: SimRng) -> Result<Self> {
        Self::build(graph, state, params, rng, false)
    }

    fn build(graph: &'g Graph, state: OpinionState, params: ModelParams, rng: SimRng, group: bool) -> Result<Self> {
        params.validate()?;
        if state.len() != graph.n() {
            return Err(invalid(format!(
                "opinion vector has {} entries, graph has {} nodes",
                state.len(),
                graph.n()
            )));
        }
        let kernel = BiasKernel::new(params.gamma);
        let n = graph.n();
        let complete = n >= 2 && graph.edge_count() == n * (n - 1) / 2;
        let sampler = if kernel == BiasKernel::Uniform {
            Sampler::Uniform
        } else if group && complete {
            Sampler::Groups(MeanField::build(&state.opinions, kernel, params.d_eps))
        } else {
            Sampler::Edges(WeightCache::build(graph, &state.opinions, kernel, params.d_eps))
        };
        Ok(Self {
            graph,
            params,
            kernel,
            opinions: state.opinions,
            iteration: state.iteration,
            rng,
            sampler,
        })
    }

    pub fn opinions(&self) -> &[f64] {
        &self.opinions
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn into_state(self) -> OpinionState {
        OpinionState {
            opinions: self.opinions,
            iteration: self.iteration,
        }
    }

    /// One iteration of `n` attempts, with the draw order of [`step`].
    pub fn step(&mut self) -> usize {
        let g = self.graph;
        let n = g.n();
        let (epsilon, mu, d_eps) = (self.params.epsilon, self.params.mu, self.params.d_eps);
        let mut changed = 0;
        for _ in 0..n {
            let i = self.rng.random_range(0..n);
            let u: f64 = self.rng.random();
            let j = match &mut self.sampler {
                Sampler::Groups(groups) => match groups.pick(i, u) {
                    Some(j) => j,
                    None => continue,
                },
                sampler => {
                    let nb = g.neighbors(i);
                    if nb.is_empty() {
                        continue;
                    }
                    let k = match sampler {
                        Sampler::Edges(cache) => cache.pick(g, i, u),
                        _ => uniform_index(u, nb.len()),
                    };
                    nb[k] as usize
                }
            };
            let (xi, xj) = (self.opinions[i], self.opinions[j]);
            if interact(&mut self.opinions, i, j, epsilon, mu) {
                changed += 1;
                for (agent, before) in [(i, xi), (j, xj)] {
                    if self.opinions[agent] == before {
                        continue;
                    }
                    match &mut self.sampler {
                        Sampler::Edges(cache) => cache.refresh(g, &self.opinions, self.kernel, d_eps, agent),
                        Sampler::Groups(groups) => groups.relocate(agent, self.opinions[agent]),
                        Sampler::Uniform => {}
                    }
                }
            }
        }
        self.iteration += 1;
        changed
    }

    fn sample(&self) -> TraceSample {
        let s = snapshot(&self.opinions, self.params.cluster_tol).expect("validated, non-empty opinions");
        TraceSample {
            iteration: self.iteration,
            participation: s.participation,
            clusters: s.clusters,
            distance: s.distance,
        }
    }

    /// Steps until the convergence predicate holds at a check boundary or
    /// the iteration cap is reached. The predicate is first evaluated before
    /// any step, then every `check_interval` iterations and at the cap.
    pub fn run_to_end(mut self) -> RunResult {
        let ModelParams {
            epsilon,
            conv_delta,
            check_interval,
            max_iterations,
            ..
        } = self.params;
        let mut trace = Vec::new();
        let converged = loop {
            let t = self.iteration;
            if t % check_interval == 0 || t >= max_iterations {
                trace.push(self.sample());
                if is_converged(&self.opinions, self.graph, epsilon, conv_delta) {
                    break true;
                }
                if t >= max_iterations {
                    break false;
                }
            }
            self.step();
        };
        RunResult {
            converged,
            iterations_used: self.iteration,
            final_opinions: self.opinions,
            trace,
        }
    }
}

/// Initialises opinions and runs the dynamics with a single RNG stream
/// seeded by `seed`: initial draws first, then the interaction draws.
pub fn run(g: &Graph, spec: &InitSpec, params: &ModelParams, seed: u64) -> Result<RunResult> {
    params.validate()?;
    if g.n() == 0 {
        return Err(invalid("cannot run on an empty graph"));
    }
    let mut rng = rng_from_seed(seed);
    let state = init_opinions_with(g, spec, &mut rng)?;
    Ok(Simulation::new(g, state, params.clone(), rng)?.run_to_end())
}
