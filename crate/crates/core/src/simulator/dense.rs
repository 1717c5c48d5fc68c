//! Dense-matrix reference simulator. Slow and independent of the in-place
//! kernels: each gate is expanded to its full `2^n x 2^n` unitary and the
//! circuit unitary is the ordered product.

use num_complex::Complex64;

use super::StateVector;
use crate::circuit::{Circuit, Gate};
use crate::{Error, Result};

pub const DENSE_LIMIT: usize = 6;

type Matrix = Vec<Vec<Complex64>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|r| (0..dim).map(|k| c(if r == k { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect()
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let dim = a.len();
    (0..dim)
        .map(|r| {
            (0..dim)
                .map(|k| (0..dim).map(|j| a[r][j] * b[j][k]).sum())
                .collect()
        })
        .collect()
}

/// Small matrix of a gate in the basis `|q_0 q_1⟩` with `q_0` the high bit.
fn local_matrix(gate: &Gate, params: &[f64]) -> (Vec<usize>, Matrix) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match *gate {
        Gate::H(q) => (vec![q], vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]]),
        Gate::Rx(q, a) => {
            let t = a.resolve(params) / 2.0;
            (
                vec![q],
                vec![
                    vec![c(t.cos(), 0.0), c(0.0, -t.sin())],
                    vec![c(0.0, -t.sin()), c(t.cos(), 0.0)],
                ],
            )
        }
        Gate::Rzz(a, b, angle) => {
            let t = angle.resolve(params) / 2.0;
            let minus = c(t.cos(), -t.sin());
            let plus = c(t.cos(), t.sin());
            let mut m = vec![vec![c(0.0, 0.0); 4]; 4];
            m[0][0] = minus;
            m[1][1] = plus;
            m[2][2] = plus;
            m[3][3] = minus;
            (vec![a, b], m)
        }
        Gate::Swap(a, b) => {
            let mut m = vec![vec![c(0.0, 0.0); 4]; 4];
            m[0][0] = c(1.0, 0.0);
            m[1][2] = c(1.0, 0.0);
            m[2][1] = c(1.0, 0.0);
            m[3][3] = c(1.0, 0.0);
            (vec![a, b], m)
        }
    }
}

/// Embeds a local gate matrix: `U[r][k] = m[r_local][k_local]` when `r` and
/// `k` agree on every qubit outside the gate, else 0.
fn embed(n: usize, qubits: &[usize], m: &Matrix) -> Matrix {
    let dim = 1usize << n;
    let mask: usize = qubits.iter().map(|&q| 1 << q).sum();
    let local = |z: usize| {
        qubits
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | ((z >> q) & 1))
    };
    (0..dim)
        .map(|r| {
            (0..dim)
                .map(|k| {
                    if (r & !mask) == (k & !mask) {
                        m[local(r)][local(k)]
                    } else {
                        c(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn dense_reference(circuit: &Circuit, params: &[f64], start: &StateVector) -> Result<StateVector> {
    let n = circuit.n();
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: DENSE_LIMIT,
        });
    }
    super::check_run(n, circuit.param_slots(), params, start)?;
    let mut unitary = identity(1 << n);
    for gate in circuit.gates() {
        let (qubits, m) = local_matrix(gate, params);
        unitary = matmul(&embed(n, &qubits, &m), &unitary);
    }
    let amps = unitary
        .iter()
        .map(|row| row.iter().zip(start.amplitudes()).map(|(u, a)| u * a).sum())
        .collect();
    StateVector::from_amplitudes(n, amps)
}
