//! The `algobias` command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage errors (unknown subcommand or flag,
//! malformed value), 1 for everything else with a diagnostic on stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{io_err, Error, Result};
use crate::graph::{read_communities, read_edge_list, write_communities, write_edge_list, Graph};
use crate::io::{read_opinions, sweep_csv_bytes, write_run_json, RunRecord};
use crate::metrics::{avg_pairwise_distance, detect_clusters, participation_ratio, DEFAULT_CLUSTER_TOL};
use crate::opinion::run;
use crate::sweep::{preset, run_sweep, LfrTopology, PRESETS};
use crate::{InitSpec, InitVariant, ModelParams, SweepConfig, TopologySpec};

/// Environment variable overriding the default sweep worker count.
pub const WORKERS_ENV: &str = "ALGOBIAS_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "algobias", version, about = "Algorithmic-bias opinion dynamics on networks")]
struct Cli {
    /// Only log errors.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    quiet: bool,
    /// More logging; repeat for debug output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a topology and write it as an edge list.
    GenerateGraph {
        #[command(flatten)]
        topology: TopologyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge-list destination.
        #[arg(long)]
        out: PathBuf,
        /// Community sidecar for LFR graphs; defaults to `<out>.communities`.
        #[arg(long)]
        communities: Option<PathBuf>,
    },
    /// Run one simulation and emit the run record as JSON.
    Run(RunArgs),
    /// Run a parameter sweep and write the aggregate CSV.
    Sweep {
        /// TOML sweep description.
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        /// Named preset, see `algobias presets`.
        #[arg(long)]
        preset: Option<String>,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the replicate count.
        #[arg(long)]
        replicates: Option<usize>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; defaults to the available cores.
        #[arg(long, env = WORKERS_ENV)]
        workers: Option<usize>,
    },
    /// Participation ratio, cluster count and pairwise distance of an opinion vector.
    Metrics {
        /// Whitespace or comma-separated values, or a run JSON.
        #[arg(long)]
        opinions: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CLUSTER_TOL)]
        cluster_tol: f64,
    },
    /// List the named sweep presets.
    Presets {
        /// Print the full TOML of one preset.
        #[arg(long)]
        show: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Kind {
    Complete,
    Er,
    Ba,
    Lfr,
}

#[derive(Args, Debug)]
struct TopologyArgs {
    #[arg(long = "topology", visible_alias = "kind", value_enum, default_value = "complete")]
    kind: Kind,
    #[arg(long, default_value_t = 250)]
    n: usize,
    /// ER edge probability.
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// BA edges per arriving node.
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// LFR mixing: fraction of each node's edges leaving its community.
    #[arg(long, default_value_t = 0.1)]
    mu_lfr: f64,
    #[arg(long, default_value_t = 3.0)]
    tau1: f64,
    #[arg(long, default_value_t = 1.5)]
    tau2: f64,
    #[arg(long, default_value_t = 10.0)]
    avg_deg: f64,
    #[arg(long, default_value_t = 50)]
    min_comm: usize,
    #[arg(long)]
    max_comm: Option<usize>,
    #[arg(long)]
    max_degree: Option<usize>,
}

impl TopologyArgs {
    fn spec(&self) -> TopologySpec {
        match self.kind {
            Kind::Complete => TopologySpec::Complete { n: self.n },
            Kind::Er => TopologySpec::Er { n: self.n, p: self.p },
            Kind::Ba => TopologySpec::Ba { n: self.n, k: self.k },
            Kind::Lfr => TopologySpec::Lfr(LfrTopology {
                n: self.n,
                tau1: self.tau1,
                tau2: self.tau2,
                mu_values: vec![self.mu_lfr],
                avg_deg: self.avg_deg,
                min_comm: self.min_comm,
                max_comm: self.max_comm,
                max_degree: self.max_degree,
            }),
        }
    }

    fn build(&self, seed: u64) -> Result<Graph> {
        let spec = self.spec();
        spec.build(spec.mixing_values()[0], seed)
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    topology: TopologyArgs,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    mu: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seed of the random topology; defaults to `--seed`.
    #[arg(long)]
    graph_seed: Option<u64>,
    /// Run on this edge list instead of generating a topology.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Community labels for `--graph`.
    #[arg(long, requires = "graph")]
    graph_communities: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "uniform")]
    init: InitVariant,
    #[arg(long, default_value_t = 0.01)]
    sigma: f64,
    /// Community means for `--init fixed-means`.
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 0.75, 1.0])]
    means: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    max_iterations: u64,
    #[arg(long, default_value_t = 1e-4)]
    d_eps: f64,
    /// JSON destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ValueEnum for InitVariant {
    fn value_variants<'a>() -> &'a [Self] {
        &[Self::Uniform, Self::RandomMeans, Self::FixedMeans]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.name()))
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    init_logging(cli.quiet, cli.verbose);
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn init_logging(quiet: bool, verbose: u8) {
    let level = match (quiet, verbose) {
        (true, _) => log::LevelFilter::Error,
        (false, 0) => log::LevelFilter::Warn,
        (false, 1) => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).format_timestamp(None).try_init();
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(io_err(path)),
        None => std::io::stdout().write_all(bytes).map_err(io_err("<stdout>")),
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::GenerateGraph {
            topology,
            seed,
            out,
            communities,
        } => {
            let g = topology.build(seed)?;
            write_edge_list(&g, &out)?;
            if g.communities().is_some() {
                let side = communities.unwrap_or_else(|| {
                    let mut s = out.clone().into_os_string();
                    s.push(".communities");
                    s.into()
                });
                write_communities(&g, &side)?;
            }
            let s = g.degree_stats();
            println!(
                "n={} edges={} avg_degree={:.4} min_degree={} max_degree={} components={}",
                g.n(),
                g.edge_count(),
                s.avg_degree,
                s.min_degree,
                s.max_degree,
                s.n_components
            );
            if g.communities().is_some() {
                println!("communities={:?}", g.community_sizes());
            }
            Ok(())
        }
        Command::Run(args) => run_one(args),
        Command::Sweep {
            config,
            preset: name,
            out,
            replicates,
            seed,
            workers,
        } => {
            let mut cfg = match (config, name) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
                    SweepConfig::from_toml_str(&text)?
                }
                (None, Some(name)) => preset(&name).ok_or_else(|| {
                    let known: Vec<&str> = PRESETS.iter().map(|p| p.0).collect();
                    Error::Config(format!("unknown preset {name:?}; known: {}", known.join(", ")))
                })?,
                (None, None) => unreachable!("clap requires --config or --preset"),
            };
            if let Some(r) = replicates {
                cfg.replicates = r;
            }
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            if workers == 0 {
                return Err(Error::Config("workers: must be at least 1".into()));
            }
            log::info!(
                "{} cells x {} replicates on {workers} workers",
                cfg.grid().len(),
                cfg.replicates
            );
            let table = run_sweep(&cfg, workers)?;
            let failed: usize = table.rows.iter().map(|r| r.failures).sum();
            if failed > 0 {
                log::warn!("{failed} runs failed");
            }
            emit(out.as_deref(), &sweep_csv_bytes(&table))
        }
        Command::Metrics { opinions, cluster_tol } => {
            let x = read_opinions(&opinions)?;
            let partition = detect_clusters(&x, cluster_tol)?;
            println!("C={}", participation_ratio(&partition));
            println!("clusters={}", partition.len());
            println!("dist={}", avg_pairwise_distance(&x));
            Ok(())
        }
        Command::Presets { show } => {
            match show {
                Some(name) => {
                    let cfg = preset(&name).ok_or_else(|| Error::Config(format!("unknown preset {name:?}")))?;
                    print!("{}", cfg.to_toml_string());
                }
                None => {
                    for (name, about) in PRESETS {
                        println!("{name:<24}{about}");
                    }
                }
            }
            Ok(())
        }
    }
}

fn run_one(args: RunArgs) -> Result<()> {
    let init = match args.init {
        InitVariant::Uniform => InitSpec::uniform(),
        InitVariant::RandomMeans => InitSpec::random_means(args.sigma),
        InitVariant::FixedMeans => InitSpec::fixed_means(args.means.clone(), args.sigma),
    };
    let (g, topology) = match &args.graph {
        Some(path) => {
            let g = read_edge_list(path)?;
            let g = match &args.graph_communities {
                Some(labels) => {
                    let labels = read_communities(labels, g.n())?;
                    g.with_communities(labels)?
                }
                None => g,
            };
            (g, format!("file:{}", path.display()))
        }
        None => {
            let g = args.topology.build(args.graph_seed.unwrap_or(args.seed))?;
            (g, args.topology.spec().name().to_string())
        }
    };
    let params = ModelParams {
        d_eps: args.d_eps,
        ..ModelParams::new(args.epsilon, args.gamma, args.mu).with_max_iterations(args.max_iterations)
    };
    let result = run(&g, &init, &params, args.seed)?;
    let record = RunRecord::new(topology, &params, &init, args.seed, &result);
    log::info!(
        "converged={} iterations={} C={}",
        record.converged,
        record.iterations_used,
        record.final_participation
    );
    match &args.out {
        Some(path) => write_run_json(&record, path),
        None => emit(None, format!("{}\n", record.to_json()).as_bytes()),
    }
}
