//! `lcqaoa` command-line tool.
//!
//! Exit status: 0 on success, 2 for usage or configuration errors, 3 when a
//! run fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lcqaoa::circuit::{build_lc_ansatz, build_original_ansatz, metrics, DurationModel};
use lcqaoa::graph::{chain_prefix, exact_maxcut, find_chain, generate_random_regular, Graph};
use lcqaoa::harness::{
    emit_report, load_graph, place_on_device, read_graph, run_solve, run_sweep, AnsatzKind,
    ExperimentConfig, OutputFormat,
};
use lcqaoa::postprocess::post_process_set;
use lcqaoa::simulator::SampleSet;
use lcqaoa::Error;
use toml::{Table, Value};

const OUT_DIR_ENV: &str = "LCQAOA_OUT_DIR";

#[derive(Parser)]
#[command(name = "lcqaoa", version, about = "Linear-chain QAOA for MaxCut")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random d-regular graph as JSON.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        weighted: bool,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find a long simple path of a graph.
    Chain {
        #[command(flatten)]
        experiment: ExperimentArgs,
    },
    /// Gate counts, depth and modeled duration of an ansatz.
    Metrics {
        #[command(flatten)]
        experiment: ExperimentArgs,
    },
    /// Optimize, sample and post-process one instance; writes a report.
    Solve {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value = "json")]
        format: OutputFormat,
    },
    /// Repeat a solve over a list of values of one parameter; writes CSV.
    Sweep {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        vary: Option<String>,
        /// Comma-separated values of the varied parameter.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        #[arg(long)]
        repeats: Option<usize>,
        #[arg(long)]
        metrics_only: bool,
    },
    /// Bit-flip local search over a sample CSV (`bitstring,count`).
    Postprocess {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        samples: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Output directory; defaults to the config's `output`, then
    /// $LCQAOA_OUT_DIR, then the working directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// File name stem.
    #[arg(long)]
    name: Option<String>,
}

/// Flags mirroring `ExperimentConfig`; they override the config file.
#[derive(Args, Default)]
struct ExperimentArgs {
    /// TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    weighted: bool,
    #[arg(long)]
    ansatz: Option<String>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    chain_restarts: Option<usize>,
    #[arg(long)]
    chain_seed: Option<u64>,
    #[arg(long)]
    fraction: Option<f64>,
    /// `exact` or `shots`.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    mode_shots: Option<u64>,
    #[arg(long)]
    mode_seed: Option<u64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    trajectories: Option<usize>,
    /// `all_to_all` or `linear`.
    #[arg(long)]
    device: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    rho_begin: Option<f64>,
    #[arg(long)]
    fourier_ladder: bool,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    sample_seed: Option<u64>,
    #[arg(long)]
    no_post_process: bool,
}

fn table<'a>(root: &'a mut Table, key: &str) -> &'a mut Table {
    root.entry(key)
        .or_insert_with(|| Value::Table(Table::new()))
        .as_table_mut()
        .expect("config sections are tables")
}

fn set(root: &mut Table, path: &[&str], value: Option<Value>) {
    let Some(value) = value else { return };
    let (last, parents) = path.split_last().expect("non-empty path");
    let mut t = root;
    for p in parents {
        t = table(t, p);
    }
    t.insert(last.to_string(), value);
}

fn int<T: TryInto<i64>>(x: Option<T>) -> Option<Value> {
    x.and_then(|v| v.try_into().ok()).map(Value::Integer)
}

fn float(x: Option<f64>) -> Option<Value> {
    x.map(Value::Float)
}

fn string(x: &Option<String>) -> Option<Value> {
    x.clone().map(Value::String)
}

impl ExperimentArgs {
    /// Config file overlaid with flags, as a TOML table.
    fn table(&self) -> Result<Table, Error> {
        let mut root = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?;
                text.parse::<Table>()
                    .map_err(|e| Error::config("config", format!("{}: {}", path.display(), e.message())))?
            }
            None => Table::new(),
        };
        let r = &mut root;
        set(r, &["instance", "graph"], self.graph.as_ref().map(|p| Value::String(p.display().to_string())));
        set(r, &["instance", "n"], int(self.n));
        set(r, &["instance", "d"], int(self.d));
        set(r, &["instance", "seed"], int(self.seed));
        set(r, &["instance", "weighted"], self.weighted.then_some(Value::Boolean(true)));
        set(r, &["ansatz"], string(&self.ansatz));
        set(r, &["p"], int(self.p));
        set(r, &["chain", "restarts"], int(self.chain_restarts));
        set(r, &["chain", "seed"], int(self.chain_seed));
        set(r, &["chain", "fraction"], float(self.fraction));
        set(r, &["mode", "kind"], string(&self.mode));
        set(r, &["mode", "shots"], int(self.mode_shots));
        set(r, &["mode", "seed"], int(self.mode_seed));
        set(r, &["noise", "p1"], float(self.p1));
        set(r, &["noise", "p2"], float(self.p2));
        set(r, &["noise", "trajectories"], int(self.trajectories));
        set(r, &["device"], string(&self.device));
        set(r, &["optimizer", "tol"], float(self.tol));
        set(r, &["optimizer", "max_iter"], int(self.max_iter));
        set(r, &["optimizer", "rho_begin"], float(self.rho_begin));
        set(r, &["fourier_ladder"], self.fourier_ladder.then_some(Value::Boolean(true)));
        set(r, &["shots"], int(self.shots));
        set(r, &["sample_seed"], int(self.sample_seed));
        set(r, &["post_process"], self.no_post_process.then_some(Value::Boolean(false)));
        Ok(root)
    }

    fn config(&self, default_ansatz: Option<&str>) -> Result<ExperimentConfig, Error> {
        let mut root = self.table()?;
        if let Some(a) = default_ansatz {
            root.entry("ansatz").or_insert_with(|| Value::String(a.into()));
        }
        if root.get("mode").and_then(|m| m.get("kind")).and_then(Value::as_str) == Some("shots") {
            let mode = table(&mut root, "mode");
            mode.entry("shots").or_insert(Value::Integer(1024));
            mode.entry("seed").or_insert(Value::Integer(0));
        }
        ExperimentConfig::from_toml(&toml::to_string(&root).map_err(|e| Error::config("config", e.to_string()))?)
    }
}

impl OutputArgs {
    fn dir(&self, cfg: Option<&ExperimentConfig>) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| cfg.and_then(|c| c.output.clone()))
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }

    fn stem(&self, default: &str) -> String {
        self.name.clone().unwrap_or_else(|| default.to_string())
    }
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn json(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json value serializes")
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Gen {
            n,
            d,
            seed,
            weighted,
            output,
        } => {
            if d == 0 || d >= n || n * d % 2 != 0 {
                return Err(Error::config("d", format!("no {d}-regular graph on {n} vertices")));
            }
            let g = generate_random_regular(n, d, seed, weighted)?;
            match output {
                Some(path) => write(&path, &g.to_json())?,
                None => println!("{}", g.to_json()),
            }
        }
        Command::Chain { experiment } => {
            let cfg = experiment.config(Some("lc"))?;
            let g = load_graph(&cfg.instance)?;
            let c = cfg.chain_config();
            let chain = chain_prefix(&find_chain(&g, c.restarts, c.seed)?, c.fraction);
            println!(
                "{}",
                json(serde_json::json!({
                    "n": g.n(),
                    "length": chain.len(),
                    "hamiltonian": chain.len() == g.n(),
                    "vertices": chain.vertices,
                }))
            );
        }
        Command::Metrics { experiment } => {
            let cfg = experiment.config(None)?;
            let g = load_graph(&cfg.instance)?;
            let model = DurationModel::default();
            let (circuit, chain) = match cfg.ansatz {
                AnsatzKind::Original => (build_original_ansatz(&g, cfg.p)?, None),
                AnsatzKind::Lc => {
                    let c = cfg.chain_config();
                    let chain = chain_prefix(&find_chain(&g, c.restarts, c.seed)?, c.fraction);
                    (build_lc_ansatz(&g, &chain, cfg.p)?, Some(chain))
                }
            };
            let routed = place_on_device(&circuit, chain.as_ref(), cfg.device)?;
            println!(
                "{}",
                json(serde_json::json!({
                    "n": g.n(),
                    "edges": g.edges().len(),
                    "p": cfg.p,
                    "chain_length": chain.as_ref().map(|c| c.len()),
                    "metrics": metrics(&circuit, &model),
                    "routed_metrics": routed.map(|r| metrics(&r.circuit, &model)),
                }))
            );
        }
        Command::Solve {
            experiment,
            output,
            format,
        } => {
            let cfg = experiment.config(None)?;
            let report = run_solve(&cfg)?;
            for path in emit_report(&report, format, &output.dir(Some(&cfg)), &output.stem("report"))? {
                println!("{}", path.display());
            }
        }
        Command::Sweep {
            experiment,
            output,
            vary,
            values,
            repeats,
            metrics_only,
        } => {
            let mut root = experiment.table()?;
            let sweep = table(&mut root, "sweep");
            if let Some(v) = vary {
                sweep.insert("vary".into(), Value::String(v));
            }
            if let Some(v) = values {
                sweep.insert("values".into(), Value::Array(v.into_iter().map(Value::Float).collect()));
            }
            if let Some(r) = repeats {
                sweep.insert("repeats".into(), int(Some(r)).expect("repeat count fits"));
            }
            if metrics_only {
                sweep.insert("metrics_only".into(), Value::Boolean(true));
            }
            let cfg = ExperimentConfig::from_toml(
                &toml::to_string(&root).map_err(|e| Error::config("config", e.to_string()))?,
            )?;
            let spec = cfg
                .sweep
                .clone()
                .ok_or_else(|| Error::config("sweep", "give --vary and --values or a [sweep] section"))?;
            let t = run_sweep(&cfg, &spec)?;
            let path = output.dir(Some(&cfg)).join(format!("{}.csv", output.stem("sweep")));
            write(&path, &t.to_csv())?;
            println!("{}", path.display());
        }
        Command::Postprocess {
            graph,
            samples,
            output,
        } => {
            let g: Graph = read_graph(&graph)?;
            let text = std::fs::read_to_string(&samples)
                .map_err(|e| Error::Io(format!("{}: {e}", samples.display())))?;
            let set = SampleSet::from_csv(&text, 0)?;
            let maxcut = exact_maxcut(&g)?.value;
            let out = post_process_set(&g, &set, maxcut)?;
            let dir = output.dir(None);
            let stem = output.stem("postprocessed");
            let csv = dir.join(format!("{stem}.csv"));
            write(&csv, &out.samples.to_csv())?;
            let summary = dir.join(format!("{stem}_summary.json"));
            write(
                &summary,
                &json(serde_json::json!({
                    "true_maxcut": maxcut,
                    "shots": set.shots,
                    "summary": out.summary,
                    "flips": out.results.values().collect::<Vec<_>>(),
                })),
            )?;
            println!("{}\n{}", csv.display(), summary.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config { .. } => 2,
                _ => 3,
            })
        }
    }
}
