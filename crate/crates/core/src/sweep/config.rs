use serde::{Deserialize, Serialize};

use super::GridPoint;
use crate::error::{Error, Result};
use crate::graph::{generate_ba, generate_complete, generate_er, generate_lfr, Graph, LfrParams};
use crate::opinion::{InitSpec, ModelParams};

/// LFR topology with a list of mixing values to sweep over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LfrTopology {
    pub n: usize,
    pub tau1: f64,
    pub tau2: f64,
    pub mu_values: Vec<f64>,
    pub avg_deg: f64,
    pub min_comm: usize,
    #[serde(default)]
    pub max_comm: Option<usize>,
    #[serde(default)]
    pub max_degree: Option<usize>,
}

impl LfrTopology {
    pub fn params(&self, mu_mix: f64) -> LfrParams {
        LfrParams {
            max_comm: self.max_comm,
            max_degree: self.max_degree,
            ..LfrParams::new(self.n, self.tau1, self.tau2, mu_mix, self.avg_deg, self.min_comm)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TopologySpec {
    Complete { n: usize },
    Er { n: usize, p: f64 },
    Ba { n: usize, k: usize },
    Lfr(LfrTopology),
}

impl TopologySpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Complete { .. } => "complete",
            Self::Er { .. } => "er",
            Self::Ba { .. } => "ba",
            Self::Lfr(_) => "lfr",
        }
    }

    /// Mixing values swept over; `[None]` for non-LFR topologies.
    pub fn mixing_values(&self) -> Vec<Option<f64>> {
        match self {
            Self::Lfr(l) => l.mu_values.iter().copied().map(Some).collect(),
            _ => vec![None],
        }
    }

    pub fn build(&self, mu_lfr: Option<f64>, seed: u64) -> Result<Graph> {
        match self {
            Self::Complete { n } => generate_complete(*n),
            Self::Er { n, p } => generate_er(*n, *p, seed),
            Self::Ba { n, k } => generate_ba(*n, *k, seed),
            Self::Lfr(l) => {
                let mu = mu_lfr.ok_or_else(|| Error::InvalidArgument("LFR topology needs a mixing value".into()))?;
                generate_lfr(&l.params(mu), seed)
            }
        }
    }
}

fn default_epsilons() -> Vec<f64> {
    (2..=10).map(|k| k as f64 / 10.0).collect()
}
fn default_gammas() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 5.0).collect()
}
fn default_mu() -> f64 {
    0.5
}
fn default_replicates() -> usize {
    10
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
fn default_d_eps() -> f64 {
    1e-4
}
fn default_cluster_tol() -> f64 {
    crate::metrics::DEFAULT_CLUSTER_TOL
}

/// Declarative sweep description; loadable from TOML with unknown keys
/// rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub topology: TopologySpec,
    #[serde(default = "default_epsilons")]
    pub epsilon_values: Vec<f64>,
    #[serde(default = "default_gammas")]
    pub gamma_values: Vec<f64>,
    #[serde(default = "default_mu")]
    pub mu: f64,
    #[serde(default)]
    pub init: InitSpec,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: u64,
    #[serde(default = "default_check_interval")]
    pub check_interval: u64,
    #[serde(default = "default_conv_delta")]
    pub conv_delta: f64,
    #[serde(default = "default_d_eps")]
    pub d_eps: f64,
    #[serde(default = "default_cluster_tol")]
    pub cluster_tol: f64,
    /// Draw a fresh topology for every task instead of one per replicate.
    #[serde(default)]
    pub independent_graphs: bool,
}

impl SweepConfig {
    /// Config with the default grids and stop criteria.
    pub fn new(topology: TopologySpec) -> Self {
        Self {
            topology,
            epsilon_values: default_epsilons(),
            gamma_values: default_gammas(),
            mu: default_mu(),
            init: InitSpec::uniform(),
            replicates: default_replicates(),
            master_seed: 0,
            max_iterations: default_max_iterations(),
            check_interval: default_check_interval(),
            conv_delta: default_conv_delta(),
            d_eps: default_d_eps(),
            cluster_tol: default_cluster_tol(),
            independent_graphs: false,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("sweep config is always representable in TOML")
    }

    pub fn model_params(&self, epsilon: f64, gamma: f64) -> ModelParams {
        ModelParams {
            max_iterations: self.max_iterations,
            check_interval: self.check_interval,
            conv_delta: self.conv_delta,
            d_eps: self.d_eps,
            cluster_tol: self.cluster_tol,
            ..ModelParams::new(epsilon, gamma, self.mu)
        }
    }

    /// Grid cells in lexicographic `(mu_lfr, epsilon, gamma)` order, each axis
    /// in the order listed in the config.
    pub fn grid(&self) -> Vec<GridPoint> {
        let mut grid = Vec::new();
        for mu_lfr in self.topology.mixing_values() {
            for &epsilon in &self.epsilon_values {
                for &gamma in &self.gamma_values {
                    grid.push(GridPoint { mu_lfr, epsilon, gamma });
                }
            }
        }
        grid
    }

    /// Field-level validation; errors name the offending key.
    pub fn validate(&self) -> Result<()> {
        let cfg = |msg: String| Err(Error::Config(msg));
        if self.replicates < 1 {
            return cfg("replicates: must be at least 1".into());
        }
        if self.epsilon_values.is_empty() {
            return cfg("epsilon_values: must not be empty".into());
        }
        if self.gamma_values.is_empty() {
            return cfg("gamma_values: must not be empty".into());
        }
        for gamma in &self.gamma_values {
            for eps in &self.epsilon_values {
                if let Err(e) = self.model_params(*eps, *gamma).validate() {
                    return cfg(format!("epsilon_values/gamma_values/mu: {e}"));
                }
            }
        }
        if let Err(e) = self.init.validate() {
            return cfg(format!("init: {e}"));
        }
        match &self.topology {
            TopologySpec::Complete { n } if *n < 2 => return cfg(format!("topology.n: {n} < 2")),
            TopologySpec::Er { p, .. } if !(0.0..=1.0).contains(p) => {
                return cfg(format!("topology.p: {p} outside [0, 1]"))
            }
            TopologySpec::Ba { n, k } if *k < 1 || k >= n => {
                return cfg(format!("topology.k: need 1 <= k < n, got k={k}, n={n}"))
            }
            TopologySpec::Lfr(l) => {
                if l.mu_values.is_empty() {
                    return cfg("topology.mu_values: must not be empty".into());
                }
                if let Some(m) = l.mu_values.iter().find(|m| !(**m > 0.0 && **m < 1.0)) {
                    return cfg(format!("topology.mu_values: {m} outside (0, 1)"));
                }
            }
            _ => {}
        }
        if self.init.variant != crate::opinion::InitVariant::Uniform && !matches!(self.topology, TopologySpec::Lfr(_)) {
            return cfg(format!(
                "init.variant: '{}' needs a topology with communities",
                self.init.variant.name()
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_is_nine_by_eleven() {
        let cfg = SweepConfig::new(TopologySpec::Complete { n: 250 });
        assert_eq!(cfg.grid().len(), 99);
        assert_eq!(cfg.epsilon_values[1], 0.3);
        assert_eq!(cfg.gamma_values[3], 0.6);
        assert_eq!(cfg.grid()[12], GridPoint { mu_lfr: None, epsilon: 0.3, gamma: 0.2 });
    }

    #[test]
    fn toml_round_trip_and_defaults() {
        let text = r#"
            replicates = 3
            master_seed = 11
            epsilon_values = [0.2, 0.3]
            gamma_values = [0.0, 1.0]

            [topology]
            kind = "er"
            n = 100
            p = 0.1
        "#;
        let cfg = SweepConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.topology, TopologySpec::Er { n: 100, p: 0.1 });
        assert_eq!(cfg.mu, 0.5);
        assert_eq!(cfg.max_iterations, 100_000);
        assert_eq!(SweepConfig::from_toml_str(&cfg.to_toml_string()).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = SweepConfig::from_toml_str("replicats = 3\n[topology]\nkind = \"complete\"\nn = 10\n").unwrap_err();
        assert!(err.to_string().contains("replicats"), "{err}");
        let err = SweepConfig::from_toml_str("[topology]\nkind = \"complete\"\nn = 10\nq = 1\n").unwrap_err();
        assert!(err.to_string().contains('q'), "{err}");
    }

    #[test]
    fn field_level_errors() {
        let err = SweepConfig::from_toml_str("replicates = 0\n[topology]\nkind = \"complete\"\nn = 10\n").unwrap_err();
        assert!(err.to_string().contains("replicates"), "{err}");
        let err = SweepConfig::from_toml_str("mu = 0.7\n[topology]\nkind = \"complete\"\nn = 10\n").unwrap_err();
        assert!(err.to_string().contains("mu"), "{err}");
        let err = SweepConfig::from_toml_str(
            "[topology]\nkind = \"complete\"\nn = 10\n[init]\nvariant = \"random-means\"\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("init.variant"), "{err}");
    }
}
