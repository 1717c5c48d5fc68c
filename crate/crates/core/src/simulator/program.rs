use std::collections::HashMap;

use num_complex::Complex64;

use super::{check_run, StateVector};
use crate::circuit::{Angle, Circuit, Gate};
use crate::Result;

/// A circuit prepared for repeated evaluation.
///
/// Every maximal run of consecutive RZZ gates bound to the same parameter slot
/// is fused into one diagonal. The diagonal's distinct values are tabulated so
/// an evaluation computes one complex exponential per distinct value instead
/// of one per amplitude.
#[derive(Debug, Clone)]
pub struct Program {
    n: usize,
    param_slots: usize,
    ops: Vec<Op>,
}

#[derive(Debug, Clone)]
enum Op {
    Gate(Gate),
    /// Amplitude `z` gains `exp(-i params[slot] levels[level_of[z]])`.
    Phase {
        slot: usize,
        levels: Vec<f64>,
        level_of: Vec<u32>,
    },
}

impl Program {
    pub fn compile(c: &Circuit) -> Self {
        let mut ops = Vec::new();
        let mut run: Vec<(usize, usize, f64)> = Vec::new();
        let mut run_slot = None;
        let n = c.n();
        let flush = |run: &mut Vec<(usize, usize, f64)>, slot: Option<usize>, ops: &mut Vec<Op>| {
            if let Some(slot) = slot {
                if !run.is_empty() {
                    ops.push(fuse(n, slot, run));
                }
            }
            run.clear();
        };
        for gate in c.gates() {
            match *gate {
                Gate::Rzz(a, b, Angle::Slot { slot, scale }) => {
                    if run_slot != Some(slot) {
                        flush(&mut run, run_slot, &mut ops);
                        run_slot = Some(slot);
                    }
                    run.push((a, b, scale));
                }
                other => {
                    flush(&mut run, run_slot, &mut ops);
                    run_slot = None;
                    ops.push(Op::Gate(other));
                }
            }
        }
        flush(&mut run, run_slot, &mut ops);
        Self {
            n,
            param_slots: c.param_slots(),
            ops,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn run(&self, params: &[f64], start: &StateVector) -> Result<StateVector> {
        check_run(self.n, self.param_slots, params, start)?;
        let mut s = start.clone();
        let mut phases = Vec::new();
        for op in &self.ops {
            match op {
                Op::Gate(g) => s.apply_gate(g, params),
                Op::Phase {
                    slot,
                    levels,
                    level_of,
                } => {
                    let gamma = params[*slot];
                    phases.clear();
                    phases.extend(levels.iter().map(|&l| Complex64::from_polar(1.0, -gamma * l)));
                    for (amp, &k) in s.amps.iter_mut().zip(level_of) {
                        *amp *= phases[k as usize];
                    }
                }
            }
        }
        Ok(s)
    }
}

fn fuse(n: usize, slot: usize, run: &[(usize, usize, f64)]) -> Op {
    let mut index: HashMap<u64, u32> = HashMap::new();
    let mut levels = Vec::new();
    let level_of = (0..1usize << n)
        .map(|z| {
            let value: f64 = run
                .iter()
                .map(|&(a, b, scale)| {
                    let half = scale / 2.0;
                    if ((z >> a) ^ (z >> b)) & 1 == 0 {
                        half
                    } else {
                        -half
                    }
                })
                .sum();
            *index.entry(value.to_bits()).or_insert_with(|| {
                levels.push(value);
                (levels.len() - 1) as u32
            })
        })
        .collect();
    Op::Phase {
        slot,
        levels,
        level_of,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_lc_ansatz, build_original_ansatz, linear_map, route_greedy};
    use crate::graph::{find_chain, generate_random_regular};
    use crate::simulator::run_circuit;

    fn assert_same(a: &StateVector, b: &StateVector) {
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn compiled_matches_gate_by_gate() {
        let params = [0.31, -0.72, 1.1, 0.05];
        for seed in 0..3 {
            let g = generate_random_regular(10, 3, seed, seed % 2 == 1).unwrap();
            let zero = StateVector::zero(10).unwrap();
            let orig = build_original_ansatz(&g, 2).unwrap();
            assert_same(
                &Program::compile(&orig).run(&params, &zero).unwrap(),
                &run_circuit(&orig, &params, &zero).unwrap(),
            );
            let chain = find_chain(&g, 8, seed).unwrap();
            let lc = build_lc_ansatz(&g, &chain, 2).unwrap();
            assert_same(
                &Program::compile(&lc).run(&params, &zero).unwrap(),
                &run_circuit(&lc, &params, &zero).unwrap(),
            );
            // SWAPs interleave with RZZ runs after routing.
            let routed = route_greedy(&orig, &linear_map(10).unwrap(), None).unwrap();
            assert_same(
                &Program::compile(&routed.circuit).run(&params, &zero).unwrap(),
                &run_circuit(&routed.circuit, &params, &zero).unwrap(),
            );
        }
    }

    #[test]
    fn param_count_checked() {
        let g = generate_random_regular(4, 3, 0, false).unwrap();
        let p = Program::compile(&build_original_ansatz(&g, 1).unwrap());
        assert!(p.run(&[0.1], &StateVector::zero(4).unwrap()).is_err());
    }
}
