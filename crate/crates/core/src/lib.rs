//! Algorithmic-bias opinion dynamics on complex networks.
//!
//! Agents hold continuous opinions in `[0, 1]`. At each interaction an agent
//! `i` is drawn uniformly and picks a neighbour `j` with probability
//! proportional to `max(|x_i - x_j|, d_eps)^(-gamma)`; if the two opinions are
//! within the confidence bound `epsilon` both move towards each other by a
//! fraction `mu` of their gap. With `gamma = 0` this is the Deffuant-Weisbuch
//! model.
//!
//! The crate is organised as:
//!
//! - [`graph`]: topologies (complete, Erdős–Rényi, Barabási–Albert, LFR) and
//!   edge-list I/O.
//! - [`opinion`]: opinion state, partner selection, the update rule and the
//!   run loop.
//! - [`metrics`]: cluster extraction, participation ratio, pairwise distance
//!   and the convergence predicate.
//! - [`sweep`]: parameter grids, deterministic seeding, the parallel runner
//!   and the named figure presets.
//! - [`io`]: run JSON and sweep CSV formats.
//! - [`cli`]: the `algobias` command-line front end.
//!
//! Everything stochastic takes an explicit `u64` seed and is bit-reproducible.

pub mod cli;
pub mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod opinion;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{DegreeStats, Graph};
pub use metrics::ClusterPartition;
pub use sweep::{AggregateTable, RowStats, SweepConfig, TopologySpec};
pub use opinion::{InitSpec, InitVariant, ModelParams, OpinionState, RunResult, Simulation, TraceSample};


/// Deterministic RNG used for every stochastic component.
pub type SimRng = rand_chacha::ChaCha8Rng;

/// Builds the crate RNG from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> SimRng {
    use rand::SeedableRng;
    SimRng::seed_from_u64(seed)
}
