//! The variational loop: objectives over ansatz circuits, the derivative-free
//! optimizer, FOURIER initialization and the end-to-end QAOA run.

mod cobyla;
mod fourier;

pub use cobyla::{minimize_cobyla_like, CobylaOptions, Evaluation, OptRun};
pub use fourier::{fourier_extend, fourier_to_params, params_to_fourier, FourierCoeffs};

use serde::{Deserialize, Serialize};

use crate::circuit::{build_lc_ansatz, build_original_ansatz, Circuit};
use crate::graph::{cut_value, exact_maxcut, Chain, Graph};
use crate::ising::{build_diagonal, build_ising, CostDiagonal, IsingModel};
use crate::rng::Stream;
use crate::simulator::{expectation_exact, sample, Program, SampleSet, StateVector};
use crate::{Error, Result};

/// Angles `(γ_1, β_1, ..., γ_p, β_p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSchedule {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl ParamSchedule {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.len() != betas.len() {
            return Err(Error::DimMismatch {
                expected: gammas.len(),
                got: betas.len(),
            });
        }
        if gammas.iter().chain(&betas).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("non-finite angle".into()));
        }
        Ok(Self { gammas, betas })
    }

    pub fn zeros(p: usize) -> Self {
        Self {
            gammas: vec![0.0; p],
            betas: vec![0.0; p],
        }
    }

    pub fn p(&self) -> usize {
        self.gammas.len()
    }

    /// Interleaved slot vector `[γ_1, β_1, γ_2, β_2, ...]`.
    pub fn to_vec(&self) -> Vec<f64> {
        self.gammas
            .iter()
            .zip(&self.betas)
            .flat_map(|(&g, &b)| [g, b])
            .collect()
    }

    pub fn from_vec(v: &[f64]) -> Result<Self> {
        if v.len() % 2 != 0 {
            return Err(Error::DimMismatch {
                expected: v.len() + 1,
                got: v.len(),
            });
        }
        Self::new(
            v.iter().step_by(2).copied().collect(),
            v.iter().skip(1).step_by(2).copied().collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum EvalMode {
    Exact,
    /// Mean energy over `shots` samples. Every evaluation reuses `seed`, so the
    /// objective is a deterministic function of the angles.
    Shots { shots: u64, seed: u64 },
}

/// `⟨H_C⟩` of the ansatz state as a function of the angle vector.
#[derive(Debug, Clone)]
pub struct Objective {
    program: Program,
    cost: CostDiagonal,
    mode: EvalMode,
    param_slots: usize,
}

impl Objective {
    pub fn param_slots(&self) -> usize {
        self.param_slots
    }

    /// Final state for `params`, from `|0...0⟩`.
    pub fn state(&self, params: &[f64]) -> Result<StateVector> {
        self.program.run(params, &StateVector::zero(self.program.n())?)
    }

    pub fn exact(&self, params: &[f64]) -> Result<f64> {
        expectation_exact(&self.state(params)?, &self.cost)
    }

    pub fn eval(&self, params: &[f64]) -> Result<f64> {
        match self.mode {
            EvalMode::Exact => self.exact(params),
            EvalMode::Shots { shots, seed } => {
                let set = sample(&self.state(params)?, shots, seed);
                let n = set.n;
                Ok(set.mean_of(|x| {
                    let z = x.iter().take(n).enumerate().fold(0usize, |acc, (i, &b)| acc | ((b as usize) << i));
                    self.cost.values[z]
                }))
            }
        }
    }
}

pub fn make_objective(ansatz: &Circuit, cost: &CostDiagonal, mode: EvalMode) -> Result<Objective> {
    if ansatz.n() != cost.n {
        return Err(Error::DimMismatch {
            expected: ansatz.n(),
            got: cost.n,
        });
    }
    if ansatz.param_slots() % 2 != 0 {
        return Err(Error::DimMismatch {
            expected: ansatz.param_slots() + 1,
            got: ansatz.param_slots(),
        });
    }
    Ok(Objective {
        program: Program::compile(ansatz),
        cost: cost.clone(),
        mode,
        param_slots: ansatz.param_slots(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AnsatzSpec {
    Original,
    Lc { chain: Chain },
}

impl AnsatzSpec {
    pub fn build(&self, g: &Graph, p: usize) -> Result<Circuit> {
        match self {
            AnsatzSpec::Original => build_original_ansatz(g, p),
            AnsatzSpec::Lc { chain } => build_lc_ansatz(g, chain, p),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AnsatzSpec::Original => "original",
            AnsatzSpec::Lc { .. } => "lc",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaOptions {
    pub p: usize,
    pub mode: EvalMode,
    pub optimizer: CobylaOptions,
    /// Final sampling of the optimized state.
    pub shots: u64,
    pub sample_seed: u64,
    /// Starting angles; all zeros when absent.
    pub init: Option<ParamSchedule>,
    /// Extra optimizer runs from seeded random starts in `[-π/4, π/4]`.
    pub restarts: usize,
    pub restart_seed: u64,
}

impl Default for QaoaOptions {
    fn default() -> Self {
        Self {
            p: 1,
            mode: EvalMode::Exact,
            optimizer: CobylaOptions::default(),
            shots: 1024,
            sample_seed: 0,
            init: None,
            restarts: 0,
            restart_seed: 0,
        }
    }
}

/// Approximation ratios of a sample set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArSummary {
    pub mean_ar: f64,
    pub best_ar: f64,
}

pub fn sample_ar(g: &Graph, samples: &SampleSet, maxcut: f64) -> ArSummary {
    let ratio = |x: &[u8]| {
        if maxcut > 0.0 {
            cut_value(g, x).expect("sample length matches graph") / maxcut
        } else {
            1.0
        }
    };
    ArSummary {
        mean_ar: samples.mean_of(ratio),
        best_ar: samples.entries().map(|(x, _)| ratio(&x)).fold(0.0, f64::max),
    }
}

#[derive(Debug, Clone)]
pub struct QaoaRun {
    pub opt: OptRun,
    pub schedule: ParamSchedule,
    pub circuit: Circuit,
    pub state: StateVector,
    pub samples: SampleSet,
    pub maxcut: f64,
    /// `(offset - ⟨H_C⟩/2) / maxcut` of the final state.
    pub expected_ar: f64,
    pub ar: ArSummary,
}

/// Exact MaxCut value and Ising model shared by repeated runs on one graph.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    pub model: IsingModel,
    pub cost: CostDiagonal,
    pub maxcut: f64,
}

impl Instance {
    pub fn new(graph: Graph) -> Result<Self> {
        let model = build_ising(&graph);
        let cost = build_diagonal(&model)?;
        let maxcut = exact_maxcut(&graph)?.value;
        Ok(Self {
            graph,
            model,
            cost,
            maxcut,
        })
    }

    /// AR of a uniformly random assignment.
    pub fn baseline_ar(&self) -> f64 {
        if self.maxcut > 0.0 {
            self.model.offset / self.maxcut
        } else {
            1.0
        }
    }

    pub fn ar_of_energy(&self, energy: f64) -> f64 {
        if self.maxcut > 0.0 {
            self.model.cut_from_energy(energy) / self.maxcut
        } else {
            1.0
        }
    }
}

pub fn optimize_qaoa(graph: &Graph, ansatz: &AnsatzSpec, opts: &QaoaOptions) -> Result<QaoaRun> {
    optimize_instance(&Instance::new(graph.clone())?, ansatz, opts)
}

pub fn optimize_instance(inst: &Instance, ansatz: &AnsatzSpec, opts: &QaoaOptions) -> Result<QaoaRun> {
    let circuit = ansatz.build(&inst.graph, opts.p)?;
    let objective = make_objective(&circuit, &inst.cost, opts.mode)?;
    let x0 = match &opts.init {
        Some(s) if s.p() == opts.p => s.to_vec(),
        Some(s) => {
            return Err(Error::DimMismatch {
                expected: opts.p,
                got: s.p(),
            })
        }
        None => vec![0.0; 2 * opts.p],
    };
    let minimize = |start: &[f64]| -> Result<OptRun> {
        let mut failure = None;
        let run = minimize_cobyla_like(
            |x| match objective.eval(x) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::INFINITY
                }
            },
            start,
            &opts.optimizer,
        );
        match failure {
            Some(e) => Err(e),
            None => Ok(run),
        }
    };
    let mut opt = minimize(&x0)?;
    let mut rng = Stream::new(opts.restart_seed);
    for _ in 0..opts.restarts {
        let start: Vec<f64> = (0..x0.len())
            .map(|_| (rng.uniform() - 0.5) * std::f64::consts::FRAC_PI_2)
            .collect();
        let run = minimize(&start)?;
        if run.final_value < opt.final_value {
            opt = run;
        }
    }
    let schedule = ParamSchedule::from_vec(&opt.final_params)?;
    let state = objective.state(&opt.final_params)?;
    let expected_ar = inst.ar_of_energy(expectation_exact(&state, &inst.cost)?);
    let samples = sample(&state, opts.shots, opts.sample_seed);
    let ar = sample_ar(&inst.graph, &samples, inst.maxcut);
    Ok(QaoaRun {
        opt,
        schedule,
        circuit,
        state,
        samples,
        maxcut: inst.maxcut,
        expected_ar,
        ar,
    })
}

/// Optimizes `p = 1, ..., p_max`, seeding each level after the first with
/// [`fourier_extend`] of the previous optimum.
pub fn fourier_ladder(
    inst: &Instance,
    ansatz: &AnsatzSpec,
    p_max: usize,
    opts: &QaoaOptions,
) -> Result<Vec<QaoaRun>> {
    let mut runs: Vec<QaoaRun> = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        let init = match runs.last() {
            Some(prev) => Some(fourier_extend(&prev.schedule)?),
            None => opts.init.clone(),
        };
        let level = QaoaOptions {
            p,
            init,
            ..opts.clone()
        };
        runs.push(optimize_instance(inst, ansatz, &level)?);
    }
    Ok(runs)
}
