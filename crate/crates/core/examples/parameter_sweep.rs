//! A small reproducible sweep described in TOML, run on all cores and
//! printed as CSV.
//!
//! ```bash
//! ALGOBIAS_WORKERS=4 cargo run -p algobias --example parameter_sweep
//! ```

use algobias::io::sweep_csv_bytes;
use algobias::sweep::run_sweep;
use algobias::SweepConfig;

const CONFIG: &str = r#"
epsilon_values = [0.2, 0.3, 0.5]
gamma_values = [0.0, 1.0, 2.0]
replicates = 5
master_seed = 7
max_iterations = 5000

[topology]
kind = "er"
n = 250
p = 0.1
"#;

fn main() -> algobias::Result<()> {
    let config = SweepConfig::from_toml_str(CONFIG)?;
    let workers = std::env::var("ALGOBIAS_WORKERS")
        .ok()
        .and_then(|w| w.parse().ok())
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    eprintln!("{} cells x {} replicates on {workers} workers", config.grid().len(), config.replicates);

    let table = run_sweep(&config, workers)?;
    print!("{}", String::from_utf8(sweep_csv_bytes(&table)).expect("CSV is UTF-8"));
    Ok(())
}
