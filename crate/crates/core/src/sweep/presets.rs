//! Named sweeps reproducing the figure grids.

use super::config::{LfrTopology, SweepConfig, TopologySpec};
use crate::opinion::InitSpec;

pub const PRESETS: &[(&str, &str)] = &[
    ("fig1-complete", "complete graph, N=250, epsilon 0.2..1.0 x gamma 0..2.0, 10 replicates"),
    ("fig1-er", "Erdos-Renyi N=250 p=0.1, epsilon 0.2..1.0 x gamma 0..2.0, 10 replicates"),
    ("fig1-ba", "Barabasi-Albert N=250 k=5, epsilon 0.2..1.0 x gamma 0..2.0, 10 replicates"),
    ("fig4-lfr-uniform", "LFR mu_lfr {0.1,0.5,0.9}, epsilon {0.2,0.3}, gamma {0..2 step 0.5}, uniform opinions"),
    ("fig4-lfr-random-means", "as fig4-lfr-uniform, random community means with sigma=0.01"),
    ("fig4-lfr-polarized", "as fig4-lfr-uniform, community means {0.25,0.5,0.75,1.0} with sigma=0.01"),
];

/// Master seed shared by all presets.
pub const PRESET_SEED: u64 = 2021;

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(name, _)| *name)
}

fn mesoscale_lfr() -> TopologySpec {
    TopologySpec::Lfr(LfrTopology {
        n: 250,
        tau1: 3.0,
        tau2: 1.5,
        mu_values: vec![0.1, 0.5, 0.9],
        avg_deg: 10.0,
        min_comm: 50,
        max_comm: Some(62),
        max_degree: None,
    })
}

fn lfr_sweep(init: InitSpec) -> SweepConfig {
    SweepConfig {
        epsilon_values: vec![0.2, 0.3],
        gamma_values: vec![0.0, 0.5, 1.0, 1.5, 2.0],
        init,
        master_seed: PRESET_SEED,
        ..SweepConfig::new(mesoscale_lfr())
    }
}

fn mean_field_sweep(topology: TopologySpec) -> SweepConfig {
    SweepConfig {
        master_seed: PRESET_SEED,
        ..SweepConfig::new(topology)
    }
}

pub fn preset(name: &str) -> Option<SweepConfig> {
    Some(match name {
        "fig1-complete" => mean_field_sweep(TopologySpec::Complete { n: 250 }),
        "fig1-er" => mean_field_sweep(TopologySpec::Er { n: 250, p: 0.1 }),
        "fig1-ba" => mean_field_sweep(TopologySpec::Ba { n: 250, k: 5 }),
        "fig4-lfr-uniform" => lfr_sweep(InitSpec::uniform()),
        "fig4-lfr-random-means" => lfr_sweep(InitSpec::random_means(0.01)),
        "fig4-lfr-polarized" => lfr_sweep(InitSpec::fixed_means(vec![0.25, 0.5, 0.75, 1.0], 0.01)),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates() {
        for name in preset_names() {
            let cfg = preset(name).unwrap();
            cfg.validate().unwrap();
        }
        assert_eq!(preset("fig1-complete").unwrap().grid().len(), 99);
        assert_eq!(preset("fig4-lfr-polarized").unwrap().grid().len(), 30);
        assert!(preset("fig9").is_none());
    }
}
