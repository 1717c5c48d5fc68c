//! Depolarizing noise by Monte-Carlo Pauli trajectories.
//!
//! After every one-qubit gate a uniformly random non-identity Pauli hits the
//! qubit with probability `p1`; after every two-qubit gate one of the 15
//! non-identity two-qubit Paulis hits the pair with probability `p2`. A SWAP
//! is `swap_natives` two-qubit gates and gets that many independent chances.
//!
//! Trajectory `t` draws its errors from child stream `(seed, t)`. Shots are
//! split as evenly as possible across trajectories (earlier trajectories take
//! the remainder) and measured with a single stream seeded by `seed`, consumed
//! in trajectory order. With `p1 = p2 = 0` every trajectory ends in the
//! noiseless state, so the pooled counts equal [`sample`](super::sample) with
//! the same seed exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sampling::Sampler;
use super::{run_circuit, SampleSet, StateVector};
use crate::circuit::{Circuit, Gate};
use crate::rng::Stream;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub p1: f64,
    pub p2: f64,
    pub trajectories: usize,
    #[serde(default = "default_swap_natives")]
    pub swap_natives: usize,
}

fn default_swap_natives() -> usize {
    3
}

impl NoiseSpec {
    pub fn new(p1: f64, p2: f64, trajectories: usize) -> Result<Self> {
        let spec = Self {
            p1,
            p2,
            trajectories,
            swap_natives: default_swap_natives(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p1", self.p1), ("p2", self.p2)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams(format!("{name} = {p} outside [0, 1]")));
            }
        }
        if self.trajectories == 0 {
            return Err(Error::InvalidParams("need at least one trajectory".into()));
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0
    }
}

fn pauli(s: &mut StateVector, q: usize, which: u64) {
    match which {
        1 => s.x(q),
        2 => s.y(q),
        3 => s.z(q),
        _ => {}
    }
}

fn inject(s: &mut StateVector, gate: &Gate, spec: &NoiseSpec, rng: &mut Stream) {
    let (a, b) = gate.qubits();
    match b {
        None => {
            if spec.p1 > 0.0 && rng.uniform() < spec.p1 {
                pauli(s, a, 1 + rng.below(3));
            }
        }
        Some(b) => {
            let events = if matches!(gate, Gate::Swap(..)) {
                spec.swap_natives
            } else {
                1
            };
            for _ in 0..events {
                if spec.p2 > 0.0 && rng.uniform() < spec.p2 {
                    let k = 1 + rng.below(15);
                    pauli(s, a, k % 4);
                    pauli(s, b, k / 4);
                }
            }
        }
    }
}

/// Samples `shots` outcomes of `c` run from `|0...0⟩` under `spec`.
pub fn noisy_run(
    c: &Circuit,
    params: &[f64],
    spec: &NoiseSpec,
    shots: u64,
    seed: u64,
) -> Result<SampleSet> {
    spec.validate()?;
    let zero = StateVector::zero(c.n())?;
    let noiseless = if spec.is_noiseless() {
        Some(Sampler::new(&run_circuit(c, params, &zero)?))
    } else {
        None
    };
    let trajectories = spec.trajectories as u64;
    let mut shot_rng = Stream::new(seed);
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for t in 0..trajectories {
        let share = shots / trajectories + u64::from(t < shots % trajectories);
        if share == 0 {
            continue;
        }
        let owned;
        let sampler = match &noiseless {
            Some(s) => s,
            None => {
                let mut noise_rng = Stream::child(seed, t);
                let mut s = zero.clone();
                for gate in c.gates() {
                    s.apply_gate(gate, params);
                    inject(&mut s, gate, spec, &mut noise_rng);
                }
                owned = Sampler::new(&s);
                &owned
            }
        };
        for _ in 0..share {
            *counts.entry(sampler.draw(&mut shot_rng)).or_insert(0) += 1;
        }
    }
    Ok(SampleSet::from_index_counts(c.n(), &counts, seed))
}
