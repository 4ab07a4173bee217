//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.
//!
//! Runs the full complete-graph grid once (99 cells x 10 replicates, up to
//! 1e5 iterations each) and shares it between the criteria that read it.
//! `ALGOBIAS_WORKERS` sets the worker count; the default is every core.

use std::collections::BTreeSet;
use std::time::Instant;

use algobias::graph::{generate_complete, Graph};
use algobias::io::{sweep_csv_bytes, RunRecord};
use algobias::metrics::{detect_clusters, participation_ratio, participation_ratio_of, DEFAULT_CLUSTER_TOL};
use algobias::opinion::{interact, run, select_partner, selection_probabilities};
use algobias::sweep::{graph_seed, preset, run_sweep, AggregateRow};
use algobias::{rng_from_seed, AggregateTable, InitSpec, ModelParams, OpinionState, Simulation, SweepConfig, TopologySpec};
use rand::Rng;

mod common;
use common::union_find_clusters;

struct Suite {
    lines: Vec<(u8, bool, String)>,
}

impl Suite {
    fn report(&mut self, id: u8, name: &str, pass: bool, detail: String) {
        let line = format!("[{}] {id}. {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        eprintln!("{line}");
        self.lines.push((id, pass, line));
    }
}

fn workers() -> usize {
    std::env::var("ALGOBIAS_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

fn cell<'t>(t: &'t AggregateTable, eps: f64, gamma: f64) -> &'t AggregateRow {
    t.rows
        .iter()
        .find(|r| near(r.point.epsilon, eps) && near(r.point.gamma, gamma))
        .unwrap_or_else(|| panic!("grid has no cell eps={eps} gamma={gamma}"))
}

fn mean_c(row: &AggregateRow) -> f64 {
    row.stats.map_or(f64::NAN, |s| s.mean_c)
}

fn replicate_c(row: &AggregateRow) -> Vec<f64> {
    row.runs.iter().map(|r| r.map_or(f64::NAN, |s| s.participation)).collect()
}

fn consensus_region(s: &mut Suite, t: &AggregateTable) {
    let cells: Vec<&AggregateRow> = t
        .rows
        .iter()
        .filter(|r| r.point.gamma <= 1.4 + 1e-9 && r.point.epsilon >= 0.5 - 1e-9)
        .collect();
    let worst = cells.iter().max_by(|a, b| mean_c(a).total_cmp(&mean_c(b))).unwrap();
    let pass = cells.iter().all(|r| mean_c(r) <= 1.3);
    s.report(
        1,
        "consensus region",
        pass,
        format!(
            "{} cells with gamma<=1.4, eps>=0.5; max mean C {:.3} at eps={} gamma={} (need <= 1.3)",
            cells.len(),
            mean_c(worst),
            worst.point.epsilon,
            worst.point.gamma
        ),
    );
}

fn baseline_fragmentation(s: &mut Suite, t: &AggregateTable) {
    let c = mean_c(cell(t, 0.2, 0.0));
    s.report(
        2,
        "bounded-confidence baseline",
        (1.5..=3.5).contains(&c),
        format!("eps=0.2 gamma=0: mean C {c:.3} (need [1.5, 3.5])"),
    );
}

// One-sided 5% critical values of Student's t for 1..=30 degrees of freedom.
const T95: [f64; 30] = [
    6.314, 2.920, 2.353, 2.132, 2.015, 1.943, 1.895, 1.860, 1.833, 1.812, 1.796, 1.782, 1.771, 1.761, 1.753, 1.746,
    1.740, 1.734, 1.729, 1.725, 1.721, 1.717, 1.714, 1.711, 1.708, 1.706, 1.703, 1.701, 1.699, 1.697,
];

fn bias_fragmentation(s: &mut Suite, t: &AggregateTable) {
    let hi = cell(t, 0.2, 2.0);
    let lo = cell(t, 0.2, 0.0);
    let diffs: Vec<f64> = replicate_c(hi).iter().zip(replicate_c(lo)).map(|(a, b)| a - b).collect();
    let n = diffs.len() as f64;
    let mean = diffs.iter().sum::<f64>() / n;
    let sd = (diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let tstat = if sd > 0.0 { mean / (sd / n.sqrt()) } else { f64::INFINITY * mean.signum() };
    let crit = T95[(diffs.len() - 2).min(29)];
    let (c_hi, c_lo) = (mean_c(hi), mean_c(lo));
    let pass = c_hi >= 10.0 && c_hi > c_lo && tstat > crit;
    s.report(
        3,
        "bias-driven fragmentation",
        pass,
        format!(
            "eps=0.2: mean C {c_hi:.3} at gamma=2 (need >= 10), {c_lo:.3} at gamma=0; paired t={tstat:.2} (need > {crit})"
        ),
    );
}

fn monotone_trend(s: &mut Suite, t: &AggregateTable) {
    let gammas = [0.0, 0.6, 1.2, 1.8];
    let c: Vec<f64> = gammas.iter().map(|&g| mean_c(cell(t, 0.3, g))).collect();
    let drops: Vec<f64> = c.windows(2).map(|w| w[0] - w[1]).filter(|d| *d > 0.0).collect();
    let pass = drops.len() <= 1 && drops.iter().all(|d| *d <= 0.5);
    s.report(
        4,
        "monotone trend in gamma",
        pass,
        format!("eps=0.3, gamma {gammas:?}: mean C {c:.3?}; inversions {drops:.3?} (allow one <= 0.5)"),
    );
}

fn distance_ceiling(s: &mut Suite, t: &AggregateTable) {
    let top = t
        .rows
        .iter()
        .filter(|r| r.stats.is_some())
        .max_by(|a, b| a.stats.unwrap().mean_dist.total_cmp(&b.stats.unwrap().mean_dist))
        .unwrap();
    let d = top.stats.unwrap().mean_dist;
    s.report(
        5,
        "distance ceiling",
        (0.10..=0.20).contains(&d),
        format!(
            "max mean pairwise distance {d:.4} at eps={} gamma={} (need [0.10, 0.20])",
            top.point.epsilon, top.point.gamma
        ),
    );
}

fn preset_graphs(name: &str) -> Vec<(Option<f64>, Graph)> {
    let cfg = preset(name).unwrap();
    let mut out = Vec::new();
    for mu in cfg.topology.mixing_values() {
        for rep in 0..cfg.replicates {
            let seed = graph_seed(cfg.master_seed, 0, rep as u64, cfg.independent_graphs);
            out.push((mu, cfg.topology.build(mu, seed).unwrap()));
        }
    }
    out
}

fn topology_realization(s: &mut Suite) {
    let er = preset_graphs("fig1-er");
    let er_deg = er.iter().map(|(_, g)| g.degree_stats().avg_degree).sum::<f64>() / er.len() as f64;
    let er_connected = er.iter().all(|(_, g)| g.degree_stats().n_components == 1);

    let ba = preset_graphs("fig1-ba");
    let ba_deg: Vec<f64> = ba.iter().map(|(_, g)| g.degree_stats().avg_degree).collect();
    let ba_ok = ba_deg.iter().all(|d| (d - 9.8).abs() <= 0.3);

    let lfr = preset_graphs("fig4-lfr-polarized");
    let mut lfr_bad = Vec::new();
    for (mu, g) in &lfr {
        let sizes = g.community_sizes();
        let deg = g.degree_stats().avg_degree;
        if sizes.len() != 4 || sizes.iter().any(|&c| c < 50) || (deg - 10.0).abs() > 1.0 {
            lfr_bad.push(format!("mu={mu:?} sizes={sizes:?} deg={deg:.2}"));
        }
    }
    let lfr_deg: Vec<f64> = lfr.iter().map(|(_, g)| g.degree_stats().avg_degree).collect();
    let (lo, hi) = lfr_deg.iter().fold((f64::MAX, f64::MIN), |(a, b), &d| (a.min(d), b.max(d)));
    let pass = (er_deg - 24.9).abs() <= 1.0 && er_connected && ba_ok && lfr_bad.is_empty();
    s.report(
        6,
        "topology realization",
        pass,
        format!(
            "ER mean degree {er_deg:.3} over {} graphs, all connected: {er_connected}; BA degree {:.3}; \
             LFR {} graphs with 4 communities >= 50, degree in [{lo:.2}, {hi:.2}]{}",
            er.len(),
            ba_deg[0],
            lfr.len() - lfr_bad.len(),
            if lfr_bad.is_empty() { String::new() } else { format!("; off: {}", lfr_bad.join(", ")) }
        ),
    );
}

fn mesoscale_polarization(s: &mut Suite) {
    let cfg = SweepConfig {
        epsilon_values: vec![0.2],
        gamma_values: vec![0.0],
        ..preset("fig4-lfr-polarized").unwrap()
    };
    let t = run_sweep(&cfg, workers()).unwrap();
    let c: Vec<(f64, f64)> = t.rows.iter().map(|r| (r.point.mu_lfr.unwrap(), mean_c(r))).collect();
    let pass = c.iter().all(|(_, c)| (3.5..=5.5).contains(c));
    s.report(
        7,
        "mesoscale polarization",
        pass,
        format!("polarized LFR, eps=0.2 gamma=0: (mu_lfr, mean C) {c:.3?} (need [3.5, 5.5])"),
    );
}

fn property_suite(s: &mut Suite) {
    let mut rng = rng_from_seed(8);
    let mut problems = Vec::new();

    // Boundedness and pairwise-sum conservation, per interaction.
    let mut worst_sum = 0.0f64;
    for _ in 0..100_000 {
        let mut x = [rng.random::<f64>(), rng.random::<f64>()];
        let before = x[0] + x[1];
        interact(&mut x, 0, 1, rng.random(), rng.random_range(0.0..=0.5));
        worst_sum = worst_sum.max((x[0] + x[1] - before).abs());
        if !x.iter().all(|v| (0.0..=1.0).contains(v)) {
            problems.push(format!("unbounded {x:?}"));
        }
    }
    if worst_sum > 1e-12 {
        problems.push(format!("pair sum drift {worst_sum:e}"));
    }
    let g = algobias::graph::generate_ba(120, 4, 3).unwrap();
    let state = algobias::opinion::init_opinions(&g, &InitSpec::uniform(), 3).unwrap();
    let mut sim = Simulation::new(&g, state, ModelParams::new(0.4, 1.3, 0.5), rng_from_seed(4)).unwrap();
    for _ in 0..300 {
        sim.step();
        if !sim.opinions().iter().all(|v| (0.0..=1.0).contains(v)) {
            problems.push("simulation left [0, 1]".into());
            break;
        }
    }

    // Selection-probability normalisation.
    let mut worst_norm = 0.0f64;
    for trial in 0..50u64 {
        let g = algobias::graph::generate_er(60, 0.2, trial).unwrap();
        let x: Vec<f64> = (0..60).map(|_| rng.random()).collect();
        let gamma = trial as f64 / 10.0;
        for i in 0..60 {
            let p = selection_probabilities(&x, &g, i, gamma, 1e-4);
            if !p.is_empty() {
                worst_norm = worst_norm.max((p.iter().sum::<f64>() - 1.0).abs());
            }
        }
    }
    if worst_norm > 1e-12 {
        problems.push(format!("selection sum off by {worst_norm:e}"));
    }

    // Participation ratio bounds and equality cases.
    for _ in 0..2_000 {
        let n = rng.random_range(1..80);
        let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        let part = detect_clusters(&x, DEFAULT_CLUSTER_TOL).unwrap();
        let c = participation_ratio(&part);
        if !(c >= 1.0 - 1e-12 && c <= part.len() as f64 + 1e-12) {
            problems.push(format!("C={c} outside [1, {}]", part.len()));
        }
    }
    for m in 1..=12 {
        if (participation_ratio_of(&vec![1.0 / m as f64; m]) - m as f64).abs() > 1e-12 {
            problems.push(format!("equal sizes C != {m}"));
        }
    }
    if participation_ratio_of(&[1.0]) != 1.0 {
        problems.push("single cluster C != 1".into());
    }

    // Cluster extraction against union-find.
    let mut mismatches = 0;
    for case in 0..1000 {
        let n = rng.random_range(1..=12);
        let x: Vec<f64> = (0..n)
            .map(|_| if case % 2 == 0 { rng.random_range(0..=40) as f64 * 0.005 } else { rng.random::<f64>() * 0.1 })
            .collect();
        let got: BTreeSet<BTreeSet<usize>> = detect_clusters(&x, DEFAULT_CLUSTER_TOL)
            .unwrap()
            .clusters
            .into_iter()
            .map(|c| c.into_iter().collect())
            .collect();
        mismatches += usize::from(got != union_find_clusters(&x, DEFAULT_CLUSTER_TOL));
    }
    if mismatches > 0 {
        problems.push(format!("{mismatches}/1000 union-find mismatches"));
    }

    // Byte-level determinism of runs and sweeps.
    let g = generate_complete(100).unwrap();
    let params = ModelParams::new(0.3, 1.5, 0.5).with_max_iterations(1_000);
    let json = |seed| {
        let r = run(&g, &InitSpec::uniform(), &params, seed).unwrap();
        RunRecord::new("complete", &params, &InitSpec::uniform(), seed, &r).to_json()
    };
    if json(5) != json(5) {
        problems.push("run JSON differs between identical runs".into());
    }
    let cfg = SweepConfig {
        epsilon_values: vec![0.2, 0.4],
        gamma_values: vec![0.0, 0.8, 1.6],
        replicates: 4,
        master_seed: 17,
        max_iterations: 2_000,
        ..SweepConfig::new(TopologySpec::Ba { n: 80, k: 3 })
    };
    let csv: Vec<Vec<u8>> = [1, 4, 8].iter().map(|&w| sweep_csv_bytes(&run_sweep(&cfg, w).unwrap())).collect();
    if csv.iter().any(|c| *c != csv[0]) {
        problems.push("sweep CSV depends on parallelism".into());
    }

    let pass = problems.is_empty();
    s.report(
        8,
        "property suite",
        pass,
        if pass {
            format!(
                "bounds, pair sums (max drift {worst_sum:.1e}), normalisation (max error {worst_norm:.1e}), \
                 C bounds, 1000 union-find cases, run/sweep determinism at 1/4/8 workers"
            )
        } else {
            problems.join("; ")
        },
    );
}

fn uniform_reduction(s: &mut Suite) {
    // Node 0 with five neighbours at very different opinions.
    let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)], None).unwrap();
    let x = OpinionState::new(vec![0.5, 0.0, 0.49, 0.5, 0.9, 1.0]).unwrap().opinions;
    let draws = 100_000usize;
    let mut hits = [0usize; 6];
    let mut rng = rng_from_seed(99);
    for _ in 0..draws {
        hits[select_partner(&x, &g, 0, 0.0, 1e-4, &mut rng).unwrap()] += 1;
    }
    let expected = draws as f64 / 5.0;
    let sigma = (draws as f64 * 0.2 * 0.8).sqrt();
    let worst = hits[1..].iter().map(|&h| (h as f64 - expected).abs() / sigma).fold(0.0, f64::max);
    s.report(
        9,
        "uniform selection at gamma=0",
        hits[0] == 0 && worst <= 3.0,
        format!("counts {:?} over {draws} draws, max deviation {worst:.2} sigma (need <= 3)", &hits[1..]),
    );
}

fn main() {
    let mut suite = Suite { lines: Vec::new() };
    let w = workers();
    let start = Instant::now();

    topology_realization(&mut suite);
    property_suite(&mut suite);
    uniform_reduction(&mut suite);
    mesoscale_polarization(&mut suite);
    eprintln!("acceptance: running the complete-graph grid on {w} workers");
    let grid = run_sweep(&preset("fig1-complete").unwrap(), w).unwrap();
    let failures: usize = grid.rows.iter().map(|r| r.failures).sum();
    assert_eq!(failures, 0, "grid runs failed");
    let csv = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-fig1-complete.csv");
    std::fs::write(&csv, sweep_csv_bytes(&grid)).unwrap();
    eprintln!("acceptance: grid written to {}", csv.display());
    consensus_region(&mut suite, &grid);
    baseline_fragmentation(&mut suite, &grid);
    bias_fragmentation(&mut suite, &grid);
    monotone_trend(&mut suite, &grid);
    distance_ceiling(&mut suite, &grid);

    suite.lines.sort_by_key(|l| l.0);
    for (_, _, line) in &suite.lines {
        println!("{line}");
    }
    let failed: Vec<u8> = suite.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    println!(
        "acceptance: {} of {} criteria passed in {:.0?}{}",
        suite.lines.len() - failed.len(),
        suite.lines.len(),
        start.elapsed(),
        if failed.is_empty() { String::new() } else { format!("; failed: {failed:?}") }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
