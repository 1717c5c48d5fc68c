use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ExperimentConfig;
use crate::circuit::CircuitMetrics;
use crate::graph::{cut_value, Graph};
use crate::simulator::SampleSet;
use crate::vqa::{Evaluation, QaoaRun};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// JSON Schema (draft 2020-12) for [`Report`] documents.
pub const REPORT_SCHEMA: &str = include_str!("../../schema/report.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArStats {
    pub mean_ar: f64,
    pub best_ar: f64,
    pub mean_ar_post: Option<f64>,
    pub best_ar_post: Option<f64>,
}

/// Shot counts per AR bin. Bin `k` holds `k/100 <= AR < (k+1)/100`; the last
/// bin (`k = 100`) holds exactly optimal cuts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArHistogram {
    pub bin_width: f64,
    pub pre: Vec<u64>,
    pub post: Option<Vec<u64>>,
}

impl ArHistogram {
    pub const BINS: usize = 101;

    pub fn new(g: &Graph, pre: &SampleSet, post: Option<&SampleSet>, maxcut: f64) -> Result<Self> {
        let bin = |s: &SampleSet| -> Result<Vec<u64>> {
            let mut bins = vec![0u64; Self::BINS];
            for (x, c) in s.entries() {
                let ar = if maxcut > 0.0 { cut_value(g, &x)? / maxcut } else { 1.0 };
                let k = ((ar * 100.0 + 1e-9).floor().max(0.0) as usize).min(Self::BINS - 1);
                bins[k] += c;
            }
            Ok(bins)
        };
        Ok(Self {
            bin_width: 0.01,
            pre: bin(pre)?,
            post: post.map(bin).transpose()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub p: usize,
    pub params: Vec<f64>,
    pub final_value: f64,
    pub expected_ar: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl From<&QaoaRun> for LevelSummary {
    fn from(r: &QaoaRun) -> Self {
        Self {
            p: r.schedule.p(),
            params: r.opt.final_params.clone(),
            final_value: r.opt.final_value,
            expected_ar: r.expected_ar,
            iterations: r.opt.iterations,
            converged: r.opt.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seeds {
    pub instance: u64,
    pub chain: Option<u64>,
    pub sample: u64,
    pub objective_shots: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub artifact_version: String,
    pub config: ExperimentConfig,
    pub n: usize,
    pub edges: usize,
    pub graph_fingerprint: String,
    pub true_maxcut: f64,
    pub baseline_ar: f64,
    pub chain: Option<Vec<usize>>,
    pub chain_length: Option<usize>,
    /// Logical ansatz circuit.
    pub metrics: CircuitMetrics,
    /// Circuit placed on the configured device, when it is not all-to-all.
    pub routed_metrics: Option<CircuitMetrics>,
    /// One entry per optimized level; a single entry without the ladder.
    pub levels: Vec<LevelSummary>,
    /// Objective evaluations of the final level.
    pub history: Vec<Evaluation>,
    pub expected_ar: f64,
    pub ar: ArStats,
    pub shots: u64,
    pub histogram: ArHistogram,
    /// Raw samples behind `ar` and `histogram`.
    pub counts: BTreeMap<String, u64>,
    pub seeds: Seeds,
    pub wall_time_s: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Header and one row of scalar fields.
    pub fn summary_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        let last = self.levels.last();
        let mut out = String::from(
            "schema_version,ansatz,n,edges,p,true_maxcut,baseline_ar,chain_length,two_qubit_count,swap_count,depth,duration_s,\
             routed_two_qubit_count,routed_swap_count,routed_depth,routed_duration_s,iterations,expected_ar,mean_ar,best_ar,\
             mean_ar_post,best_ar_post,shots,wall_time_s\n",
        );
        let m = &self.metrics;
        let r = self.routed_metrics.as_ref();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.schema_version,
            serde_json::to_value(self.config.ansatz).unwrap().as_str().unwrap(),
            self.n,
            self.edges,
            self.config.p,
            self.true_maxcut,
            self.baseline_ar,
            self.chain_length.map(|c| c.to_string()).unwrap_or_default(),
            m.two_qubit_count,
            m.swap_count,
            m.depth,
            m.duration,
            r.map(|r| r.two_qubit_count.to_string()).unwrap_or_default(),
            r.map(|r| r.swap_count.to_string()).unwrap_or_default(),
            r.map(|r| r.depth.to_string()).unwrap_or_default(),
            r.map(|r| r.duration.to_string()).unwrap_or_default(),
            last.map(|l| l.iterations).unwrap_or(0),
            self.expected_ar,
            self.ar.mean_ar,
            self.ar.best_ar,
            opt(self.ar.mean_ar_post),
            opt(self.ar.best_ar_post),
            self.shots,
            self.wall_time_s,
        );
        out
    }

    /// `ar_low,count_pre,count_post` per bin.
    pub fn histogram_csv(&self) -> String {
        let h = &self.histogram;
        let mut out = String::from("ar_low,count_pre,count_post\n");
        for (k, c) in h.pre.iter().enumerate() {
            let post = h.post.as_ref().map(|p| p[k].to_string()).unwrap_or_default();
            let _ = writeln!(out, "{:.2},{c},{post}", k as f64 * h.bin_width);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(Error::config("format", format!("expected `json` or `csv`, got `{s}`"))),
        }
    }
}

fn write(path: PathBuf, text: &str) -> Result<PathBuf> {
    std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Writes `<stem>.json`, or `<stem>.csv` plus `<stem>_histogram.csv`, into
/// `dir`. Returns the files written.
pub fn emit_report(r: &Report, format: OutputFormat, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    match format {
        OutputFormat::Json => Ok(vec![write(dir.join(format!("{stem}.json")), &r.to_json())?]),
        OutputFormat::Csv => Ok(vec![
            write(dir.join(format!("{stem}.csv")), &r.summary_csv())?,
            write(dir.join(format!("{stem}_histogram.csv")), &r.histogram_csv())?,
        ]),
    }
}
