//! MaxCut as a diagonal Ising Hamiltonian `H = Σ w_uv Z_u Z_v`.
//!
//! With spins `s_i = +1` for bit 0 and `-1` for bit 1, every assignment obeys
//! `cut(x) = offset - energy(x) / 2` where `offset = Σ w / 2`. Minimizing the
//! energy therefore maximizes the cut.

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::{Error, Result};

/// Largest qubit count whose diagonal is tabulated.
pub const DIAGONAL_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub u: usize,
    pub v: usize,
    pub j: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingModel {
    pub n: usize,
    pub couplings: Vec<Coupling>,
    pub offset: f64,
}

impl IsingModel {
    pub fn energy(&self, x: &[u8]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self
            .couplings
            .iter()
            .map(|c| if x[c.u] == x[c.v] { c.j } else { -c.j })
            .sum())
    }

    /// Cut weight recovered from an energy.
    pub fn cut_from_energy(&self, energy: f64) -> f64 {
        self.offset - energy / 2.0
    }

    fn energy_of_index(&self, z: usize) -> f64 {
        self.couplings
            .iter()
            .map(|c| {
                if ((z >> c.u) ^ (z >> c.v)) & 1 == 0 {
                    c.j
                } else {
                    -c.j
                }
            })
            .sum()
    }
}

pub fn build_ising(g: &Graph) -> IsingModel {
    IsingModel {
        n: g.n(),
        couplings: g
            .edges()
            .iter()
            .map(|e| Coupling {
                u: e.u,
                v: e.v,
                j: e.w,
            })
            .collect(),
        offset: g.total_weight() / 2.0,
    }
}

pub fn energy(m: &IsingModel, x: &[u8]) -> Result<f64> {
    m.energy(x)
}

/// Energies of all `2^n` basis states, indexed by basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct CostDiagonal {
    pub n: usize,
    pub values: Vec<f64>,
}

impl CostDiagonal {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn build_diagonal(m: &IsingModel) -> Result<CostDiagonal> {
    if m.n > DIAGONAL_LIMIT {
        return Err(Error::TooLarge {
            n: m.n,
            limit: DIAGONAL_LIMIT,
        });
    }
    let dim = 1usize << m.n;
    #[cfg(feature = "parallel")]
    let values = {
        use rayon::prelude::*;
        (0..dim)
            .into_par_iter()
            .map(|z| m.energy_of_index(z))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values = (0..dim).map(|z| m.energy_of_index(z)).collect();
    Ok(CostDiagonal { n: m.n, values })
}
