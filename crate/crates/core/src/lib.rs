//! Linear-chain QAOA (LC-QAOA) and the original QAOA ansatz for weighted MaxCut.
//!
//! The crate is organized bottom-up:
//!
//! - [`graph`]: graphs, cuts, the exact MaxCut oracle and greedy chain search.
//! - [`ising`]: the diagonal ZZ cost Hamiltonian and its tabulated diagonal.
//! - [`circuit`]: gate IR, ansatz builders, coupling maps, SWAP routing and metrics.
//! - [`simulator`]: statevector simulation, sampling and Pauli-trajectory noise.
//! - [`vqa`]: objectives, the derivative-free optimizer and FOURIER initialization.
//! - [`postprocess`]: greedy single-bit-flip local search.
//! - [`harness`]: experiment configs, end-to-end runs, sweeps and reports.
//!
//! Bitstrings follow one convention everywhere: character `i` (left to right)
//! is vertex/qubit `i`, which is bit `i` (value `1 << i`) of a basis index.

pub mod bits;
pub mod circuit;
pub mod error;
pub mod graph;
pub mod harness;
pub mod ising;
pub mod postprocess;
pub mod rng;
pub mod simulator;
pub mod vqa;

pub use error::{Error, Result};
