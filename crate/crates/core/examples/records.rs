//! Persisting results: a run record as JSON and a sweep as CSV, both read
//! back.

use algobias::graph::generate_ba;
use algobias::io::{read_run_json, read_sweep_csv, write_run_json, write_sweep_csv, RunRecord};
use algobias::opinion::run;
use algobias::sweep::run_sweep;
use algobias::{InitSpec, ModelParams, SweepConfig, TopologySpec};

fn main() -> algobias::Result<()> {
    let dir = std::env::temp_dir().join("algobias-records");
    std::fs::create_dir_all(&dir).map_err(|e| algobias::Error::Io { path: dir.clone(), source: e })?;

    let g = generate_ba(250, 5, 1)?;
    let params = ModelParams::new(0.3, 1.0, 0.5);
    let init = InitSpec::uniform();
    let result = run(&g, &init, &params, 9)?;
    let json = dir.join("run.json");
    write_run_json(&RunRecord::new("ba", &params, &init, 9, &result), &json)?;
    let back = read_run_json(&json)?;
    println!(
        "{}: converged={} in {} iterations, {} trace samples",
        json.display(),
        back.converged,
        back.iterations_used,
        back.trace.len()
    );

    let config = SweepConfig {
        epsilon_values: vec![0.25, 0.5],
        gamma_values: vec![0.0, 1.5],
        replicates: 3,
        max_iterations: 2_000,
        ..SweepConfig::new(TopologySpec::Ba { n: 100, k: 3 })
    };
    let csv = dir.join("sweep.csv");
    write_sweep_csv(&run_sweep(&config, 2)?, &csv)?;
    for row in read_sweep_csv(&csv)? {
        println!(
            "eps={} gamma={}: mean C {:.3} (sd {:.3}), mean distance {:.3}",
            row.epsilon, row.gamma, row.mean_c, row.std_c, row.mean_dist
        );
    }
    Ok(())
}
