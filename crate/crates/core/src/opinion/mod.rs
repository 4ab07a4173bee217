//! Opinion state, model parameters, initial conditions and the run loop.

mod dynamics;
mod mean_field;
mod selection;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

pub use dynamics::{interact, run, step, Simulation};
pub use selection::{
    sample_weighted, select_partner, selection_probabilities, selection_weights, BiasKernel,
};

use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::{rng_from_seed, SimRng};

/// Per-agent opinions and the number of completed iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct OpinionState {
    pub opinions: Vec<f64>,
    pub iteration: u64,
}

impl OpinionState {
    pub fn new(opinions: Vec<f64>) -> Result<Self> {
        if let Some((i, x)) = opinions.iter().enumerate().find(|(_, x)| !(0.0..=1.0).contains(*x)) {
            return Err(invalid(format!("opinion {x} of agent {i} outside [0, 1]")));
        }
        Ok(Self { opinions, iteration: 0 })
    }

    pub fn len(&self) -> usize {
        self.opinions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opinions.is_empty()
    }
}

fn default_d_eps() -> f64 {
    1e-4
}
fn default_max_iterations() -> u64 {
    100_000
}
fn default_check_interval() -> u64 {
    100
}
fn default_conv_delta() -> f64 {
    1e-6
}
fn default_cluster_tol() -> f64 {
    crate::metrics::DEFAULT_CLUSTER_TOL
}

/// Dynamics parameters and stop criteria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Confidence bound.
    pub epsilon: f64,
    /// Algorithmic-bias exponent.
    pub gamma: f64,
    /// Convergence parameter.
    pub mu: f64,
    /// Lower clamp on opinion distance inside the selection weight.
    #[serde(default = "default_d_eps")]
    pub d_eps: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: u64,
    #[serde(default = "default_check_interval")]
    pub check_interval: u64,
    #[serde(default = "default_conv_delta")]
    pub conv_delta: f64,
    /// Gap used for cluster extraction in trace samples.
    #[serde(default = "default_cluster_tol")]
    pub cluster_tol: f64,
}

impl ModelParams {
    pub fn new(epsilon: f64, gamma: f64, mu: f64) -> Self {
        Self {
            epsilon,
            gamma,
            mu,
            d_eps: default_d_eps(),
            max_iterations: default_max_iterations(),
            check_interval: default_check_interval(),
            conv_delta: default_conv_delta(),
            cluster_tol: default_cluster_tol(),
        }
    }

    pub fn with_max_iterations(mut self, max_iterations: u64) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(invalid(format!("epsilon {} outside [0, 1]", self.epsilon)));
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(invalid(format!("gamma {} must be finite and >= 0", self.gamma)));
        }
        if !(self.mu > 0.0 && self.mu <= 0.5) {
            return Err(invalid(format!("mu {} outside (0, 0.5]", self.mu)));
        }
        if !(self.d_eps > 0.0) {
            return Err(invalid(format!("d_eps {} must be positive", self.d_eps)));
        }
        if self.check_interval == 0 {
            return Err(invalid("check_interval must be at least 1"));
        }
        if !(self.conv_delta > 0.0) {
            return Err(invalid(format!("conv_delta {} must be positive", self.conv_delta)));
        }
        if !(self.cluster_tol > 0.0) {
            return Err(invalid(format!("cluster_tol {} must be positive", self.cluster_tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitVariant {
    /// i.i.d. uniform on `[0, 1]`.
    Uniform,
    /// Each community gets a uniform random mean; members are normal around it.
    RandomMeans,
    /// Community `c` is centred on `fixed_means[c % len]`.
    FixedMeans,
}

impl InitVariant {
    pub fn name(self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::RandomMeans => "random-means",
            Self::FixedMeans => "fixed-means",
        }
    }
}

fn default_sigma() -> f64 {
    0.01
}
fn default_fixed_means() -> Vec<f64> {
    vec![0.25, 0.5, 0.75, 1.0]
}

/// Initial opinion distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitSpec {
    pub variant: InitVariant,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_fixed_means")]
    pub fixed_means: Vec<f64>,
}

impl Default for InitSpec {
    fn default() -> Self {
        Self::uniform()
    }
}

impl InitSpec {
    pub fn uniform() -> Self {
        Self {
            variant: InitVariant::Uniform,
            sigma: default_sigma(),
            fixed_means: default_fixed_means(),
        }
    }

    pub fn random_means(sigma: f64) -> Self {
        Self {
            variant: InitVariant::RandomMeans,
            sigma,
            ..Self::uniform()
        }
    }

    pub fn fixed_means(means: Vec<f64>, sigma: f64) -> Self {
        Self {
            variant: InitVariant::FixedMeans,
            sigma,
            fixed_means: means,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.variant == InitVariant::Uniform {
            return Ok(());
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(invalid(format!("sigma {} must be positive", self.sigma)));
        }
        if self.variant == InitVariant::FixedMeans {
            if self.fixed_means.is_empty() {
                return Err(invalid("fixed_means must not be empty"));
            }
            if let Some(m) = self.fixed_means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
                return Err(invalid(format!("fixed mean {m} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Draws initial opinions with a fresh RNG seeded by `seed`.
pub fn init_opinions(g: &Graph, spec: &InitSpec, seed: u64) -> Result<OpinionState> {
    init_opinions_with(g, spec, &mut rng_from_seed(seed))
}

/// Draws initial opinions from `rng`.
///
/// Draw order: for `Uniform`, one draw per node in id order. For the
/// community variants, first one uniform mean per community id (random
/// means only), then one normal draw per node in id order. Values are
/// clipped to `[0, 1]`.
pub fn init_opinions_with(g: &Graph, spec: &InitSpec, rng: &mut SimRng) -> Result<OpinionState> {
    spec.validate()?;
    let opinions = match spec.variant {
        InitVariant::Uniform => (0..g.n()).map(|_| rng.random::<f64>()).collect(),
        InitVariant::RandomMeans | InitVariant::FixedMeans => {
            let labels = g.communities().ok_or_else(|| {
                invalid(format!(
                    "{} initialisation needs a graph with community labels",
                    spec.variant.name()
                ))
            })?;
            let means: Vec<f64> = match spec.variant {
                InitVariant::RandomMeans => (0..g.community_count()).map(|_| rng.random::<f64>()).collect(),
                _ => (0..g.community_count())
                    .map(|c| spec.fixed_means[c % spec.fixed_means.len()])
                    .collect(),
            };
            let noise = Normal::new(0.0, spec.sigma).map_err(|e| invalid(e.to_string()))?;
            labels
                .iter()
                .map(|&c| (means[c as usize] + noise.sample(rng)).clamp(0.0, 1.0))
                .collect()
        }
    };
    OpinionState::new(opinions)
}

/// One row of the metric trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub iteration: u64,
    /// Cluster participation ratio.
    pub participation: f64,
    /// Raw number of opinion clusters.
    pub clusters: usize,
    /// Average pairwise opinion distance.
    pub distance: f64,
}

/// Outcome of a single simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub converged: bool,
    pub iterations_used: u64,
    pub final_opinions: Vec<f64>,
    pub trace: Vec<TraceSample>,
}

impl RunResult {
    /// Metrics of the final state (the last trace sample).
    pub fn final_sample(&self) -> TraceSample {
        *self.trace.last().expect("a run always records its final state")
    }
}
