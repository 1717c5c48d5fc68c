//! Statevector simulation of the circuit IR.
//!
//! Amplitudes live in one flat `Vec<Complex64>` indexed by basis index, where
//! bit `i` of the index is qubit `i`. Gate kernels update it in place.

mod dense;
mod noise;
mod program;
mod sampling;

pub use dense::{dense_reference, DENSE_LIMIT};
pub use noise::{noisy_run, NoiseSpec};
pub use program::Program;
pub use sampling::{estimate_energy, sample, SampleSet};

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, RoutedCircuit};
use crate::ising::CostDiagonal;
use crate::{Error, Result};

/// Largest simulated register.
pub const QUBIT_LIMIT: usize = 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_size(n: usize) -> Result<()> {
    if n > QUBIT_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: QUBIT_LIMIT,
        });
    }
    Ok(())
}

impl StateVector {
    /// `|0...0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, z: usize) -> Result<Self> {
        check_size(n)?;
        let mut amps = vec![ZERO; 1 << n];
        amps[z] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(n)?;
        if amps.len() != 1 << n {
            return Err(Error::DimMismatch {
                expected: 1 << n,
                got: amps.len(),
            });
        }
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    /// Probability that qubit `q` reads 1.
    pub fn marginal_one(&self, q: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(z, _)| (z >> q) & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Applies a 2x2 unitary `[[m00, m01], [m10, m11]]` to qubit `q`.
    pub fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let stride = 1usize << q;
        for block in self.amps.chunks_mut(stride << 1) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = m[0][0] * x + m[0][1] * y;
                *a1 = m[1][0] * x + m[1][1] * y;
            }
        }
    }

    pub fn h(&mut self, q: usize) {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.apply_1q(q, [[s, s], [s, -s]]);
    }

    /// `exp(-i θ/2 X)`.
    pub fn rx(&mut self, q: usize, theta: f64) {
        let c = Complex64::new((theta / 2.0).cos(), 0.0);
        let s = Complex64::new(0.0, -(theta / 2.0).sin());
        self.apply_1q(q, [[c, s], [s, c]]);
    }

    /// `exp(-i θ/2 Z⊗Z)`.
    pub fn rzz(&mut self, a: usize, b: usize, theta: f64) {
        let same = Complex64::from_polar(1.0, -theta / 2.0);
        let diff = same.conj();
        for (z, amp) in self.amps.iter_mut().enumerate() {
            *amp *= if ((z >> a) ^ (z >> b)) & 1 == 0 { same } else { diff };
        }
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        let (ma, mb) = (1usize << a, 1usize << b);
        for z in 0..self.amps.len() {
            if z & ma != 0 && z & mb == 0 {
                self.amps.swap(z, z ^ ma ^ mb);
            }
        }
    }

    pub fn x(&mut self, q: usize) {
        let m = 1usize << q;
        for z in 0..self.amps.len() {
            if z & m == 0 {
                self.amps.swap(z, z | m);
            }
        }
    }

    pub fn z(&mut self, q: usize) {
        for (z, amp) in self.amps.iter_mut().enumerate() {
            if (z >> q) & 1 == 1 {
                *amp = -*amp;
            }
        }
    }

    /// `Y = i X Z`.
    pub fn y(&mut self, q: usize) {
        self.z(q);
        self.x(q);
        for amp in &mut self.amps {
            *amp *= Complex64::i();
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate, params: &[f64]) {
        match *gate {
            Gate::H(q) => self.h(q),
            Gate::Rx(q, a) => self.rx(q, a.resolve(params)),
            Gate::Rzz(a, b, t) => self.rzz(a, b, t.resolve(params)),
            Gate::Swap(a, b) => self.swap(a, b),
        }
    }

    /// Multiplies amplitude `z` by `exp(-i γ d[z])`.
    pub fn apply_diagonal_phase(&mut self, d: &CostDiagonal, gamma: f64) -> Result<()> {
        if d.n != self.n {
            return Err(Error::DimMismatch {
                expected: self.n,
                got: d.n,
            });
        }
        for (amp, &e) in self.amps.iter_mut().zip(&d.values) {
            *amp *= Complex64::from_polar(1.0, -gamma * e);
        }
        Ok(())
    }

    /// State over `logical_n` qubits in which logical qubit `q` is read from
    /// physical qubit `placement[q]`. Amplitudes with any unplaced physical
    /// qubit in `|1⟩` are dropped.
    pub fn relabel(&self, placement: &[usize]) -> Result<StateVector> {
        let logical_n = placement.len();
        let used: usize = placement.iter().map(|&p| 1usize << p).sum();
        let mut amps = vec![ZERO; 1 << logical_n];
        for (z, &a) in self.amps.iter().enumerate() {
            if z & !used != 0 {
                continue;
            }
            let logical = placement
                .iter()
                .enumerate()
                .fold(0usize, |acc, (q, &p)| acc | (((z >> p) & 1) << q));
            amps[logical] = a;
        }
        StateVector::from_amplitudes(logical_n, amps)
    }
}

pub fn init_plus(n: usize) -> Result<StateVector> {
    check_size(n)?;
    let a = Complex64::new((0.5f64).powf(n as f64 / 2.0), 0.0);
    Ok(StateVector {
        n,
        amps: vec![a; 1 << n],
    })
}

pub fn apply_diagonal_phase(s: &mut StateVector, d: &CostDiagonal, gamma: f64) -> Result<()> {
    s.apply_diagonal_phase(d, gamma)
}

fn check_run(n: usize, param_slots: usize, params: &[f64], start: &StateVector) -> Result<()> {
    if params.len() != param_slots {
        return Err(Error::ParamCountMismatch {
            expected: param_slots,
            got: params.len(),
        });
    }
    if start.n != n {
        return Err(Error::DimMismatch {
            expected: n,
            got: start.n,
        });
    }
    Ok(())
}

/// Applies the circuit gate by gate, layer order.
pub fn run_circuit(c: &Circuit, params: &[f64], start: &StateVector) -> Result<StateVector> {
    check_run(c.n(), c.param_slots(), params, start)?;
    let mut s = start.clone();
    for gate in c.gates() {
        s.apply_gate(gate, params);
    }
    Ok(s)
}

/// Runs a routed circuit from `|0...0⟩` and returns the logical state with the
/// final qubit permutation undone.
pub fn run_routed(r: &RoutedCircuit, params: &[f64]) -> Result<StateVector> {
    let physical = run_circuit(&r.circuit, params, &StateVector::zero(r.circuit.n())?)?;
    physical.relabel(&r.final_permutation)
}

/// `Σ_z |amp_z|² d[z]`.
pub fn expectation_exact(s: &StateVector, d: &CostDiagonal) -> Result<f64> {
    if d.n != s.n {
        return Err(Error::DimMismatch {
            expected: s.n,
            got: d.n,
        });
    }
    Ok(s.amps
        .iter()
        .zip(&d.values)
        .map(|(a, &e)| a.norm_sqr() * e)
        .sum())
}
