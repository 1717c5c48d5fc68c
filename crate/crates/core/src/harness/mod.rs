//! Experiment configs, end-to-end solves, parameter sweeps and reports.
//!
//! Configs are TOML documents mirroring [`ExperimentConfig`]:
//!
//! ```toml
//! ansatz = "lc"
//! p = 1
//!
//! [instance]
//! n = 12
//! d = 3
//! seed = 7
//!
//! [chain]
//! fraction = 0.5
//!
//! [mode]
//! kind = "shots"
//! shots = 2048
//! seed = 1
//! ```

mod report;
mod sweep;

pub use report::{emit_report, ArHistogram, ArStats, LevelSummary, OutputFormat, Report, Seeds, REPORT_SCHEMA, SCHEMA_VERSION};
pub use sweep::{run_sweep, SweepRow, SweepSpec, SweepTable, Vary};

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circuit::{
    chain_layout, linear_map, metrics, route_greedy, Circuit, CircuitMetrics, DurationModel,
    RoutedCircuit,
};
use crate::graph::{chain_prefix, find_chain, generate_random_regular, Chain, Graph};
use crate::postprocess::post_process_set;
use crate::simulator::{noisy_run, NoiseSpec, SampleSet};
use crate::vqa::{
    fourier_ladder, optimize_instance, sample_ar, AnsatzSpec, CobylaOptions, EvalMode, Instance,
    QaoaOptions, QaoaRun,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzKind {
    Original,
    Lc,
}

impl std::str::FromStr for AnsatzKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original" => Ok(Self::Original),
            "lc" => Ok(Self::Lc),
            _ => Err(Error::config("ansatz", format!("expected `original` or `lc`, got `{s}`"))),
        }
    }
}

/// Hardware the circuit runs on when noise is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Device {
    #[default]
    AllToAll,
    /// A line of `n` qubits; the original ansatz is routed with SWAPs, the LC
    /// ansatz is laid out along the line.
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub n: Option<usize>,
    pub d: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub weighted: bool,
    /// Graph JSON file; excludes `n`, `d` and `weighted`.
    pub graph: Option<PathBuf>,
}

impl InstanceConfig {
    pub fn random(n: usize, d: usize, seed: u64) -> Self {
        Self {
            n: Some(n),
            d: Some(d),
            seed,
            weighted: false,
            graph: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_fraction")]
    pub fraction: f64,
}

fn default_restarts() -> usize {
    32
}

fn default_fraction() -> f64 {
    1.0
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            restarts: default_restarts(),
            seed: 0,
            fraction: default_fraction(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default = "default_rho")]
    pub rho_begin: f64,
}

fn default_tol() -> f64 {
    1e-3
}

fn default_rho() -> f64 {
    1.0
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            tol: default_tol(),
            max_iter: None,
            rho_begin: default_rho(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: InstanceConfig,
    pub ansatz: AnsatzKind,
    #[serde(default = "default_p")]
    pub p: usize,
    /// Chain search; only meaningful with `ansatz = "lc"`.
    #[serde(default)]
    pub chain: Option<ChainConfig>,
    #[serde(default = "default_mode")]
    pub mode: EvalMode,
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
    #[serde(default)]
    pub device: Device,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    /// Reach `p` through levels `1..=p`, FOURIER-initializing each.
    #[serde(default)]
    pub fourier_ladder: bool,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default)]
    pub sample_seed: u64,
    #[serde(default = "default_true")]
    pub post_process: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
}

fn default_p() -> usize {
    1
}

fn default_mode() -> EvalMode {
    EvalMode::Exact
}

fn default_shots() -> u64 {
    1024
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    pub fn new(instance: InstanceConfig, ansatz: AnsatzKind, p: usize) -> Self {
        Self {
            instance,
            ansatz,
            p,
            chain: None,
            mode: default_mode(),
            noise: None,
            device: Device::default(),
            optimizer: OptimizerConfig::default(),
            fourier_ladder: false,
            shots: default_shots(),
            sample_seed: 0,
            post_process: true,
            output: None,
            sweep: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config {
            field: "config".into(),
            message: e.message().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn chain_config(&self) -> ChainConfig {
        self.chain.unwrap_or_default()
    }

    /// Checks field ranges and combinations; errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        let inst = &self.instance;
        match (&inst.graph, inst.n, inst.d) {
            (Some(_), None, None) if !inst.weighted => {}
            (Some(_), ..) => {
                return Err(Error::config(
                    "instance.graph",
                    "a graph file excludes n, d and weighted",
                ))
            }
            (None, Some(n), Some(d)) => {
                if n < 2 {
                    return Err(Error::config("instance.n", "need at least 2 vertices"));
                }
                if d == 0 || d >= n {
                    return Err(Error::config("instance.d", format!("need 1 <= d < n = {n}")));
                }
                if n * d % 2 != 0 {
                    return Err(Error::config("instance.d", "n * d must be even"));
                }
            }
            (None, None, _) => return Err(Error::config("instance.n", "missing (or give instance.graph)")),
            (None, _, None) => return Err(Error::config("instance.d", "missing (or give instance.graph)")),
        }
        if self.p == 0 {
            return Err(Error::config("p", "must be at least 1"));
        }
        if let Some(c) = &self.chain {
            if self.ansatz != AnsatzKind::Lc {
                return Err(Error::config("chain", "chain settings require ansatz = \"lc\""));
            }
            if !(0.0..=1.0).contains(&c.fraction) {
                return Err(Error::config("chain.fraction", "must lie in [0, 1]"));
            }
            if c.restarts == 0 {
                return Err(Error::config("chain.restarts", "must be at least 1"));
            }
        }
        if let EvalMode::Shots { shots: 0, .. } = self.mode {
            return Err(Error::config("mode.shots", "must be at least 1"));
        }
        if let Some(noise) = &self.noise {
            noise.validate().map_err(|e| Error::config("noise", e.to_string()))?;
        }
        let opt = &self.optimizer;
        if !(opt.tol > 0.0 && opt.tol.is_finite()) {
            return Err(Error::config("optimizer.tol", "must be positive"));
        }
        if !(opt.rho_begin >= opt.tol && opt.rho_begin.is_finite()) {
            return Err(Error::config("optimizer.rho_begin", "must be at least tol"));
        }
        if opt.max_iter == Some(0) {
            return Err(Error::config("optimizer.max_iter", "must be at least 1"));
        }
        if self.shots == 0 {
            return Err(Error::config("shots", "must be at least 1"));
        }
        if let Some(s) = &self.sweep {
            s.validate(self)?;
        }
        Ok(())
    }

    fn qaoa_options(&self, p: usize) -> QaoaOptions {
        QaoaOptions {
            p,
            mode: self.mode,
            optimizer: CobylaOptions {
                rho_begin: self.optimizer.rho_begin,
                tol: self.optimizer.tol,
                max_iter: self.optimizer.max_iter,
            },
            shots: self.shots,
            sample_seed: self.sample_seed,
            ..Default::default()
        }
    }
}

pub fn load_graph(cfg: &InstanceConfig) -> Result<Graph> {
    match &cfg.graph {
        Some(path) => read_graph(path),
        None => generate_random_regular(
            cfg.n.ok_or_else(|| Error::config("instance.n", "missing"))?,
            cfg.d.ok_or_else(|| Error::config("instance.d", "missing"))?,
            cfg.seed,
            cfg.weighted,
        ),
    }
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Graph::from_json(&text)
}

/// The circuit that actually runs on `device`.
pub fn place_on_device(circuit: &Circuit, chain: Option<&Chain>, device: Device) -> Result<Option<RoutedCircuit>> {
    match device {
        Device::AllToAll => Ok(None),
        Device::Linear => {
            let map = linear_map(circuit.n())?;
            let layout = chain.map(|c| chain_layout(c, circuit.n(), &map)).transpose()?;
            route_greedy(circuit, &map, layout.as_deref()).map(Some)
        }
    }
}

/// Everything [`run_solve`] computes before it is flattened into a report.
#[derive(Debug, Clone)]
pub struct Solve {
    pub instance: Instance,
    pub chain: Option<Chain>,
    pub levels: Vec<QaoaRun>,
    pub routed: Option<RoutedCircuit>,
    /// Final samples, noisy when noise is configured.
    pub samples: SampleSet,
    pub post: Option<SampleSet>,
}

pub fn solve(cfg: &ExperimentConfig) -> Result<Solve> {
    cfg.validate()?;
    let graph = load_graph(&cfg.instance)?;
    let instance = Instance::new(graph)?;
    let chain = match cfg.ansatz {
        AnsatzKind::Original => None,
        AnsatzKind::Lc => {
            let c = cfg.chain_config();
            let full = find_chain(&instance.graph, c.restarts, c.seed)?;
            Some(chain_prefix(&full, c.fraction))
        }
    };
    let spec = match &chain {
        None => AnsatzSpec::Original,
        Some(c) => AnsatzSpec::Lc { chain: c.clone() },
    };
    let levels = if cfg.fourier_ladder {
        fourier_ladder(&instance, &spec, cfg.p, &cfg.qaoa_options(1))?
    } else {
        vec![optimize_instance(&instance, &spec, &cfg.qaoa_options(cfg.p))?]
    };
    let last = levels.last().expect("at least one level");
    let routed = place_on_device(&last.circuit, chain.as_ref(), cfg.device)?;
    let samples = match &cfg.noise {
        None => last.samples.clone(),
        Some(noise) => match &routed {
            None => noisy_run(&last.circuit, &last.opt.final_params, noise, cfg.shots, cfg.sample_seed)?,
            Some(r) => {
                let physical = noisy_run(&r.circuit, &last.opt.final_params, noise, cfg.shots, cfg.sample_seed)?;
                physical.map_bits(r.logical_n, |x| r.logical_bits(x))
            }
        },
    };
    let post = if cfg.post_process {
        Some(post_process_set(&instance.graph, &samples, instance.maxcut)?.samples)
    } else {
        None
    };
    Ok(Solve {
        instance,
        chain,
        levels,
        routed,
        samples,
        post,
    })
}

/// Seconds since the call; always zero on wasm32, which has no clock in std.
fn stopwatch() -> impl Fn() -> f64 {
    #[cfg(not(target_arch = "wasm32"))]
    {
        let start = std::time::Instant::now();
        move || start.elapsed().as_secs_f64()
    }
    #[cfg(target_arch = "wasm32")]
    {
        || 0.0
    }
}

/// Generate or load, find the chain, build and optimize the ansatz, sample,
/// post-process and summarize.
pub fn run_solve(cfg: &ExperimentConfig) -> Result<Report> {
    let elapsed = stopwatch();
    let s = solve(cfg)?;
    let model = DurationModel::default();
    let last = s.levels.last().expect("at least one level");
    let circuit_metrics: CircuitMetrics = metrics(&last.circuit, &model);
    let routed_metrics = s.routed.as_ref().map(|r| metrics(&r.circuit, &model));
    let g = &s.instance.graph;
    let pre = sample_ar(g, &s.samples, s.instance.maxcut);
    let post = s.post.as_ref().map(|p| sample_ar(g, p, s.instance.maxcut));
    let chain_cfg = cfg.chain_config();
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        n: g.n(),
        edges: g.edges().len(),
        graph_fingerprint: format!("{:016x}", g.fingerprint()),
        true_maxcut: s.instance.maxcut,
        baseline_ar: s.instance.baseline_ar(),
        chain: s.chain.as_ref().map(|c| c.vertices.clone()),
        chain_length: s.chain.as_ref().map(|c| c.len()),
        metrics: circuit_metrics,
        routed_metrics,
        levels: s.levels.iter().map(LevelSummary::from).collect(),
        history: last.opt.history.clone(),
        expected_ar: last.expected_ar,
        ar: ArStats {
            mean_ar: pre.mean_ar,
            best_ar: pre.best_ar,
            mean_ar_post: post.map(|a| a.mean_ar),
            best_ar_post: post.map(|a| a.best_ar),
        },
        shots: s.samples.shots,
        histogram: ArHistogram::new(g, &s.samples, s.post.as_ref(), s.instance.maxcut)?,
        counts: s.samples.counts.clone(),
        seeds: Seeds {
            instance: cfg.instance.seed,
            chain: (cfg.ansatz == AnsatzKind::Lc).then_some(chain_cfg.seed),
            sample: cfg.sample_seed,
            objective_shots: match cfg.mode {
                EvalMode::Shots { seed, .. } => Some(seed),
                EvalMode::Exact => None,
            },
        },
        wall_time_s: elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lc(n: usize, seed: u64) -> ExperimentConfig {
        ExperimentConfig::new(InstanceConfig::random(n, 3, seed), AnsatzKind::Lc, 1)
    }

    #[test]
    fn validation_names_fields() {
        let field = |cfg: &ExperimentConfig| match cfg.validate() {
            Err(Error::Config { field, .. }) => field,
            other => panic!("{other:?}"),
        };
        let mut c = lc(8, 0);
        c.instance.d = Some(8);
        assert_eq!(field(&c), "instance.d");
        let mut c = lc(7, 0);
        c.instance.d = Some(3);
        assert_eq!(field(&c), "instance.d");
        let mut c = lc(8, 0);
        c.ansatz = AnsatzKind::Original;
        c.chain = Some(ChainConfig::default());
        assert_eq!(field(&c), "chain");
        let mut c = lc(8, 0);
        c.chain = Some(ChainConfig {
            fraction: 1.5,
            ..Default::default()
        });
        assert_eq!(field(&c), "chain.fraction");
        let mut c = lc(8, 0);
        c.p = 0;
        assert_eq!(field(&c), "p");
        let mut c = lc(8, 0);
        c.mode = EvalMode::Shots { shots: 0, seed: 0 };
        assert_eq!(field(&c), "mode.shots");
        let mut c = lc(8, 0);
        c.instance.graph = Some("g.json".into());
        assert_eq!(field(&c), "instance.graph");
    }

    #[test]
    fn toml_round_trip() {
        let mut c = lc(10, 4);
        c.chain = Some(ChainConfig {
            fraction: 0.5,
            ..Default::default()
        });
        c.noise = Some(NoiseSpec::new(0.001, 0.01, 8).unwrap());
        c.mode = EvalMode::Shots { shots: 256, seed: 3 };
        assert_eq!(ExperimentConfig::from_toml(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn toml_errors() {
        assert!(matches!(
            ExperimentConfig::from_toml("ansatz = \"lc\"\n[instance]\nn = 8\nd = 3\nbogus = 1\n"),
            Err(Error::Config { .. })
        ));
        let minimal = ExperimentConfig::from_toml("ansatz = \"original\"\n[instance]\nn = 8\nd = 3\n").unwrap();
        assert_eq!(minimal.shots, 1024);
        assert_eq!(minimal.optimizer.tol, 1e-3);
        assert_eq!(minimal.mode, EvalMode::Exact);
    }

    #[test]
    fn single_edge_report() {
        let dir = std::env::temp_dir().join(format!("lcqaoa-harness-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("edge.json");
        std::fs::write(&path, Graph::unweighted(2, &[(0, 1)]).unwrap().to_json()).unwrap();
        let cfg = ExperimentConfig::new(
            InstanceConfig {
                n: None,
                d: None,
                seed: 0,
                weighted: false,
                graph: Some(path),
            },
            AnsatzKind::Original,
            1,
        );
        let r = run_solve(&cfg).unwrap();
        assert!((r.ar.mean_ar - 1.0).abs() < 0.01, "{}", r.ar.mean_ar);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn fraction_zero_is_random_guessing() {
        let mut c = lc(12, 5);
        c.chain = Some(ChainConfig {
            fraction: 0.0,
            ..Default::default()
        });
        let r = run_solve(&c).unwrap();
        assert_eq!(r.chain_length, Some(1));
        assert!((r.ar.mean_ar - r.baseline_ar).abs() <= 0.02);
        assert!((r.expected_ar - r.baseline_ar).abs() < 1e-12);
    }

    #[test]
    fn reports_are_deterministic() {
        let mut c = lc(10, 2);
        c.noise = Some(NoiseSpec::new(0.001, 0.01, 16).unwrap());
        c.device = Device::Linear;
        let mut a = run_solve(&c).unwrap();
        let mut b = run_solve(&c).unwrap();
        a.wall_time_s = 0.0;
        b.wall_time_s = 0.0;
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.routed_metrics.unwrap().swap_count, 0);
    }

    #[test]
    fn report_mean_matches_counts() {
        let mut c = lc(12, 1);
        c.ansatz = AnsatzKind::Original;
        c.p = 2;
        c.fourier_ladder = true;
        let r = run_solve(&c).unwrap();
        let g = load_graph(&c.instance).unwrap();
        let set = SampleSet::from_counts(12, r.counts.clone(), 0).unwrap();
        let mean = set.mean_of(|x| crate::graph::cut_value(&g, x).unwrap() / r.true_maxcut);
        assert!((mean - r.ar.mean_ar).abs() < 1e-12);
        assert_eq!(r.levels.len(), 2);
        assert!(r.ar.mean_ar <= r.ar.best_ar);
        assert!(r.ar.mean_ar_post.unwrap() >= r.ar.mean_ar);
        assert_eq!(r.histogram.pre.iter().sum::<u64>(), r.shots);
        assert_eq!(r.histogram.post.as_ref().unwrap().iter().sum::<u64>(), r.shots);
    }
}
