use std::fmt::Write as _;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{load_graph, place_on_device, run_solve, AnsatzKind, ChainConfig, ExperimentConfig};
use crate::circuit::{build_lc_ansatz, build_original_ansatz, metrics, DurationModel};
use crate::graph::{chain_prefix, find_chain};
use crate::rng::{derive_seed, pair_key};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Vary {
    N,
    D,
    P,
    Fraction,
}

impl Vary {
    pub fn name(self) -> &'static str {
        match self {
            Vary::N => "n",
            Vary::D => "d",
            Vary::P => "p",
            Vary::Fraction => "fraction",
        }
    }

    /// Whether different values of this parameter share the instance of a repeat.
    fn paired(self) -> bool {
        matches!(self, Vary::P | Vary::Fraction)
    }
}

impl std::str::FromStr for Vary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n" => Ok(Vary::N),
            "d" => Ok(Vary::D),
            "p" => Ok(Vary::P),
            "fraction" => Ok(Vary::Fraction),
            _ => Err(Error::config("sweep.vary", format!("expected n, d, p or fraction, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub vary: Vary,
    pub values: Vec<f64>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    /// Only generate, find chains and count gates; no optimization.
    #[serde(default)]
    pub metrics_only: bool,
}

fn default_repeats() -> usize {
    10
}

impl SweepSpec {
    pub fn validate(&self, template: &ExperimentConfig) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::config("sweep.values", "empty"));
        }
        if self.repeats == 0 {
            return Err(Error::config("sweep.repeats", "must be at least 1"));
        }
        let integral = self.values.iter().all(|v| v.fract() == 0.0 && *v >= 1.0);
        match self.vary {
            Vary::N | Vary::D | Vary::P if !integral => {
                Err(Error::config("sweep.values", "must be positive integers"))
            }
            Vary::N | Vary::D if template.instance.graph.is_some() => {
                Err(Error::config("sweep.vary", "cannot vary n or d of a graph file"))
            }
            Vary::Fraction if template.ansatz != AnsatzKind::Lc => {
                Err(Error::config("sweep.vary", "fraction sweeps require ansatz = \"lc\""))
            }
            Vary::Fraction if self.values.iter().any(|v| !(0.0..=1.0).contains(v)) => {
                Err(Error::config("sweep.values", "fractions must lie in [0, 1]"))
            }
            _ => Ok(()),
        }
    }
}

/// One `(variant, repeat)` cell. Failed cells keep their seeds and carry the
/// error message; numeric fields are then empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub variant: usize,
    pub value: f64,
    pub repeat: usize,
    pub seed: u64,
    pub instance_seed: u64,
    pub n: Option<usize>,
    pub error: Option<String>,
    pub true_maxcut: Option<f64>,
    pub baseline_ar: Option<f64>,
    pub chain_length: Option<usize>,
    pub two_qubit_count: Option<usize>,
    pub depth: Option<usize>,
    pub duration: Option<f64>,
    pub routed_two_qubit_count: Option<usize>,
    pub routed_swap_count: Option<usize>,
    pub expected_ar: Option<f64>,
    pub mean_ar: Option<f64>,
    pub best_ar: Option<f64>,
    pub mean_ar_post: Option<f64>,
    pub best_ar_post: Option<f64>,
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub vary: Vary,
    pub values: Vec<f64>,
    pub repeats: usize,
    pub rows: Vec<SweepRow>,
}

const NUMERIC: [&str; 15] = [
    "true_maxcut",
    "baseline_ar",
    "chain_length",
    "two_qubit_count",
    "depth",
    "duration",
    "routed_two_qubit_count",
    "routed_swap_count",
    "expected_ar",
    "mean_ar",
    "best_ar",
    "mean_ar_post",
    "best_ar_post",
    "iterations",
    "vertices",
];

impl SweepRow {
    fn numeric(&self) -> [Option<f64>; 15] {
        let u = |x: Option<usize>| x.map(|v| v as f64);
        [
            self.true_maxcut,
            self.baseline_ar,
            u(self.chain_length),
            u(self.two_qubit_count),
            u(self.depth),
            self.duration,
            u(self.routed_two_qubit_count),
            u(self.routed_swap_count),
            self.expected_ar,
            self.mean_ar,
            self.best_ar,
            self.mean_ar_post,
            self.best_ar_post,
            u(self.iterations),
            u(self.n),
        ]
    }
}

impl SweepTable {
    /// Rows of one variant in repeat order.
    pub fn variant(&self, k: usize) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.variant == k)
    }

    /// Mean and sample standard deviation of a numeric column over the
    /// variant's successful rows.
    pub fn stats(&self, k: usize, column: &str) -> Option<(f64, f64)> {
        let idx = NUMERIC.iter().position(|&c| c == column)?;
        let xs: Vec<f64> = self.variant(k).filter_map(|r| r.numeric()[idx]).collect();
        if xs.is_empty() {
            return None;
        }
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
        } else {
            0.0
        };
        Some((mean, var.sqrt()))
    }

    /// One line per cell, then a `mean` and a `std` line per variant.
    pub fn to_csv(&self) -> String {
        let mut out = format!("kind,variant,{},repeat,seed,instance_seed,status,error", self.vary.name());
        for c in NUMERIC {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        let cell = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            let _ = write!(
                out,
                "row,{},{},{},{},{},{},{}",
                r.variant,
                r.value,
                r.repeat,
                r.seed,
                r.instance_seed,
                if r.error.is_some() { "error" } else { "ok" },
                r.error.as_deref().unwrap_or("").replace([',', '\n'], ";"),
            );
            for x in r.numeric() {
                let _ = write!(out, ",{}", cell(x));
            }
            out.push('\n');
        }
        for (k, value) in self.values.iter().enumerate() {
            let stats: Vec<Option<(f64, f64)>> = NUMERIC.iter().map(|c| self.stats(k, c)).collect();
            for (kind, pick) in [("mean", 0), ("std", 1)] {
                let _ = write!(out, "{kind},{k},{value},,,,,");
                for s in &stats {
                    let _ = write!(out, ",{}", cell(s.map(|s| if pick == 0 { s.0 } else { s.1 })));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Config of cell `(k, repeat)`; returns it with the cell seed.
fn cell_config(template: &ExperimentConfig, spec: &SweepSpec, k: usize, repeat: usize) -> (ExperimentConfig, u64) {
    let base = template.instance.seed;
    let seed = derive_seed(base, pair_key(k as u32, repeat as u32));
    let instance_seed = if spec.vary.paired() {
        derive_seed(base, pair_key(u32::MAX, repeat as u32))
    } else {
        seed
    };
    let mut cfg = template.clone();
    cfg.sweep = None;
    cfg.instance.seed = instance_seed;
    cfg.sample_seed = derive_seed(seed, 1);
    if cfg.ansatz == AnsatzKind::Lc {
        let mut chain = template.chain_config();
        chain.seed = derive_seed(instance_seed, 2);
        cfg.chain = Some(chain);
    }
    let value = spec.values[k];
    match spec.vary {
        Vary::N => cfg.instance.n = Some(value as usize),
        Vary::D => cfg.instance.d = Some(value as usize),
        Vary::P => cfg.p = value as usize,
        Vary::Fraction => {
            cfg.chain = Some(ChainConfig {
                fraction: value,
                ..cfg.chain_config()
            })
        }
    }
    (cfg, seed)
}

fn metrics_row(cfg: &ExperimentConfig, row: &mut SweepRow) -> Result<()> {
    cfg.validate()?;
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
    let m = metrics(&circuit, &model);
    row.n = Some(g.n());
    row.chain_length = chain.as_ref().map(|c| c.len());
    row.two_qubit_count = Some(m.two_qubit_count);
    row.depth = Some(m.depth);
    row.duration = Some(m.duration);
    if let Some(r) = place_on_device(&circuit, chain.as_ref(), cfg.device)? {
        let rm = metrics(&r.circuit, &model);
        row.routed_two_qubit_count = Some(rm.two_qubit_count);
        row.routed_swap_count = Some(rm.swap_count);
    }
    Ok(())
}

fn solve_row(cfg: &ExperimentConfig, row: &mut SweepRow) -> Result<()> {
    let r = run_solve(cfg)?;
    row.n = Some(r.n);
    row.true_maxcut = Some(r.true_maxcut);
    row.baseline_ar = Some(r.baseline_ar);
    row.chain_length = r.chain_length;
    row.two_qubit_count = Some(r.metrics.two_qubit_count);
    row.depth = Some(r.metrics.depth);
    row.duration = Some(r.metrics.duration);
    row.routed_two_qubit_count = r.routed_metrics.map(|m| m.two_qubit_count);
    row.routed_swap_count = r.routed_metrics.map(|m| m.swap_count);
    row.expected_ar = Some(r.expected_ar);
    row.mean_ar = Some(r.ar.mean_ar);
    row.best_ar = Some(r.ar.best_ar);
    row.mean_ar_post = r.ar.mean_ar_post;
    row.best_ar_post = r.ar.best_ar_post;
    row.iterations = r.levels.last().map(|l| l.iterations);
    Ok(())
}

fn run_cell(template: &ExperimentConfig, spec: &SweepSpec, k: usize, repeat: usize) -> SweepRow {
    let (cfg, seed) = cell_config(template, spec, k, repeat);
    let mut row = SweepRow {
        variant: k,
        value: spec.values[k],
        repeat,
        seed,
        instance_seed: cfg.instance.seed,
        n: cfg.instance.n,
        error: None,
        true_maxcut: None,
        baseline_ar: None,
        chain_length: None,
        two_qubit_count: None,
        depth: None,
        duration: None,
        routed_two_qubit_count: None,
        routed_swap_count: None,
        expected_ar: None,
        mean_ar: None,
        best_ar: None,
        mean_ar_post: None,
        best_ar_post: None,
        iterations: None,
    };
    let result = if spec.metrics_only {
        metrics_row(&cfg, &mut row)
    } else {
        solve_row(&cfg, &mut row)
    };
    if let Err(e) = result {
        row.error = Some(e.to_string());
    }
    row
}

/// Runs every `(variant, repeat)` cell of `spec` on top of `template`.
///
/// Cell seeds are `derive_seed(template seed, (variant, repeat))`. Sweeps over
/// `p` or the chain fraction reuse one instance per repeat across variants;
/// sweeps over `n` or `d` draw a fresh instance per cell. A failing cell is
/// recorded and the sweep continues.
pub fn run_sweep(template: &ExperimentConfig, spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate(template)?;
    let cells: Vec<(usize, usize)> = (0..spec.values.len())
        .flat_map(|k| (0..spec.repeats).map(move |r| (k, r)))
        .collect();
    #[cfg(feature = "parallel")]
    let iter = cells.par_iter();
    #[cfg(not(feature = "parallel"))]
    let iter = cells.iter();
    let rows = iter.map(|&(k, r)| run_cell(template, spec, k, r)).collect();
    Ok(SweepTable {
        vary: spec.vary,
        values: spec.values.clone(),
        repeats: spec.repeats,
        rows,
    })
}
