//! Parameter sweeps: cartesian grids over `(mu_lfr, epsilon, gamma)` with a
//! fixed number of replicates per cell, deterministic seeding and a
//! worker pool whose output does not depend on the worker count.

mod config;
mod presets;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{LfrTopology, SweepConfig, TopologySpec};
pub use presets::{preset, preset_names, PRESETS};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::opinion::{run, RunResult};

/// Grid index reserved for the per-replicate topology stream.
const GRAPH_STREAM: u64 = u64::MAX;
/// Salt separating per-task topology seeds from run seeds when graphs are
/// not shared across cells.
const INDEPENDENT_GRAPH_SALT: u64 = 0x6a09_e667_f3bc_c908;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of replicate `replicate` in grid cell `grid_index`.
///
/// Three rounds of the SplitMix64 finaliser, each a bijection on `u64`:
/// `mix(mix(mix(master) ^ grid_index) ^ replicate)`. Frozen: changing it
/// changes every sweep output.
pub fn derive_seed(master_seed: u64, grid_index: u64, replicate: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master_seed) ^ grid_index) ^ replicate)
}

/// Graph seed of a task. Shared across cells for a given replicate unless
/// `independent` is set.
pub fn graph_seed(master_seed: u64, grid_index: u64, replicate: u64, independent: bool) -> u64 {
    if independent {
        derive_seed(master_seed ^ INDEPENDENT_GRAPH_SALT, grid_index, replicate)
    } else {
        derive_seed(master_seed, GRAPH_STREAM, replicate)
    }
}

/// One cell of the sweep grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub mu_lfr: Option<f64>,
    pub epsilon: f64,
    pub gamma: f64,
}

/// Final-state metrics of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub converged: bool,
    pub iterations: u64,
    pub participation: f64,
    pub clusters: usize,
    pub distance: f64,
}

impl From<&RunResult> for RunSummary {
    fn from(r: &RunResult) -> Self {
        let last = r.final_sample();
        Self {
            converged: r.converged,
            iterations: r.iterations_used,
            participation: last.participation,
            clusters: last.clusters,
            distance: last.distance,
        }
    }
}

/// Replicate statistics of one grid cell. Standard deviations use the
/// `n - 1` denominator and are 0 for a single run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowStats {
    pub runs: usize,
    pub mean_c: f64,
    pub std_c: f64,
    pub mean_clusters: f64,
    pub mean_dist: f64,
    pub std_dist: f64,
    pub mean_iters: f64,
    pub converged_frac: f64,
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    if n < 2.0 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn aggregate(results: &[RunSummary]) -> Result<RowStats> {
    if results.is_empty() {
        return Err(invalid("cannot aggregate an empty result list"));
    }
    let (mean_c, std_c) = mean_std(results.iter().map(|r| r.participation));
    let (mean_dist, std_dist) = mean_std(results.iter().map(|r| r.distance));
    let n = results.len() as f64;
    Ok(RowStats {
        runs: results.len(),
        mean_c,
        std_c,
        mean_clusters: results.iter().map(|r| r.clusters as f64).sum::<f64>() / n,
        mean_dist,
        std_dist,
        mean_iters: results.iter().map(|r| r.iterations as f64).sum::<f64>() / n,
        converged_frac: results.iter().filter(|r| r.converged).count() as f64 / n,
    })
}

/// Aggregated output of one grid cell, plus the raw per-replicate summaries
/// in replicate order. `stats` is `None` only if every replicate failed.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub point: GridPoint,
    pub stats: Option<RowStats>,
    pub runs: Vec<Option<RunSummary>>,
    pub failures: usize,
}

/// Rows in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateTable {
    pub topology: String,
    pub init: String,
    pub mu: f64,
    pub replicates: usize,
    pub rows: Vec<AggregateRow>,
}

impl AggregateTable {
    pub fn row(&self, epsilon: f64, gamma: f64, mu_lfr: Option<f64>) -> Option<&AggregateRow> {
        self.rows
            .iter()
            .find(|r| r.point.epsilon == epsilon && r.point.gamma == gamma && r.point.mu_lfr == mu_lfr)
    }
}

/// Runs every `(cell, replicate)` task on `parallelism` worker threads.
///
/// Topologies are generated once per `(mu_lfr, replicate)` in the paired
/// design and shared read-only by all cells of that replicate. A failed graph
/// generation or run is counted in the row's `failures` and does not abort
/// the sweep.
pub fn run_sweep(config: &SweepConfig, parallelism: usize) -> Result<AggregateTable> {
    config.validate()?;
    let grid = config.grid();
    let reps = config.replicates;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;

    let mixing = config.topology.mixing_values();
    let shared_graphs: Vec<Result<Graph, String>> = if config.independent_graphs {
        Vec::new()
    } else {
        let jobs: Vec<(usize, usize)> = (0..mixing.len()).flat_map(|m| (0..reps).map(move |r| (m, r))).collect();
        pool.install(|| {
            jobs.par_iter()
                .map(|&(m, r)| {
                    config
                        .topology
                        .build(mixing[m], graph_seed(config.master_seed, 0, r as u64, false))
                        .map_err(|e| e.to_string())
                })
                .collect()
        })
    };

    let params_for = |p: &GridPoint| config.model_params(p.epsilon, p.gamma);
    let tasks: Vec<(usize, usize)> = (0..grid.len()).flat_map(|g| (0..reps).map(move |r| (g, r))).collect();
    let outcomes: Vec<Result<RunSummary, String>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(gi, rep)| {
                let point = &grid[gi];
                let owned;
                let graph = if config.independent_graphs {
                    let seed = graph_seed(config.master_seed, gi as u64, rep as u64, true);
                    owned = config.topology.build(point.mu_lfr, seed).map_err(|e| e.to_string())?;
                    &owned
                } else {
                    let m = mixing.iter().position(|&x| x == point.mu_lfr).expect("grid mixing value");
                    shared_graphs[m * reps + rep].as_ref().map_err(Clone::clone)?
                };
                let seed = derive_seed(config.master_seed, gi as u64, rep as u64);
                let result = run(graph, &config.init, &params_for(point), seed).map_err(|e| e.to_string())?;
                log::debug!(
                    "cell {gi} rep {rep}: eps={} gamma={} converged={} iters={}",
                    point.epsilon,
                    point.gamma,
                    result.converged,
                    result.iterations_used
                );
                Ok(RunSummary::from(&result))
            })
            .collect()
    });

    let rows = grid
        .iter()
        .enumerate()
        .map(|(gi, &point)| {
            let cell = &outcomes[gi * reps..(gi + 1) * reps];
            for err in cell.iter().filter_map(|o| o.as_ref().err()) {
                log::warn!("eps={} gamma={} mu_lfr={:?}: {err}", point.epsilon, point.gamma, point.mu_lfr);
            }
            let runs: Vec<Option<RunSummary>> = cell.iter().map(|o| o.as_ref().ok().copied()).collect();
            let ok: Vec<RunSummary> = runs.iter().flatten().copied().collect();
            AggregateRow {
                point,
                stats: aggregate(&ok).ok(),
                failures: reps - ok.len(),
                runs,
            }
        })
        .collect();

    Ok(AggregateTable {
        topology: config.topology.name().to_string(),
        init: config.init.variant.name().to_string(),
        mu: config.mu,
        replicates: reps,
        rows,
    })
}
