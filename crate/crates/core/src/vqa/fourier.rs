//! FOURIER parametrization of QAOA angles:
//!
//! ```text
//! γ_i = Σ_k u_k sin[(k - ½)(i - ½)π / p]
//! β_i = Σ_k v_k cos[(k - ½)(i - ½)π / p]      (i = 1..p, k = 1..q)
//! ```

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::ParamSchedule;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierCoeffs {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl FourierCoeffs {
    pub fn q(&self) -> usize {
        self.u.len()
    }
}

fn phase(i: usize, k: usize, p: usize) -> f64 {
    (k as f64 + 0.5) * (i as f64 + 0.5) * std::f64::consts::PI / p as f64
}

fn sin_basis(p: usize, q: usize) -> DMatrix<f64> {
    DMatrix::from_fn(p, q, |i, k| phase(i, k, p).sin())
}

fn cos_basis(p: usize, q: usize) -> DMatrix<f64> {
    DMatrix::from_fn(p, q, |i, k| phase(i, k, p).cos())
}

pub fn fourier_to_params(c: &FourierCoeffs, p: usize) -> Result<ParamSchedule> {
    if c.u.len() != c.v.len() {
        return Err(Error::DimMismatch {
            expected: c.u.len(),
            got: c.v.len(),
        });
    }
    if c.u.is_empty() || p == 0 {
        return Err(Error::InvalidParams("need q >= 1 and p >= 1".into()));
    }
    let q = c.q();
    let gammas = sin_basis(p, q) * DVector::from_column_slice(&c.u);
    let betas = cos_basis(p, q) * DVector::from_column_slice(&c.v);
    Ok(ParamSchedule {
        gammas: gammas.iter().copied().collect(),
        betas: betas.iter().copied().collect(),
    })
}

/// Least-squares coefficients with `q` terms; exact when `q = p`.
pub fn params_to_fourier(s: &ParamSchedule, q: usize) -> Result<FourierCoeffs> {
    let p = s.p();
    if q == 0 || q > p {
        return Err(Error::DimMismatch { expected: p, got: q });
    }
    let solve = |basis: DMatrix<f64>, target: &[f64]| -> Vec<f64> {
        let svd = basis.svd(true, true);
        svd.solve(&DVector::from_column_slice(target), 1e-14)
            .expect("u and v were computed")
            .iter()
            .copied()
            .collect()
    };
    Ok(FourierCoeffs {
        u: solve(sin_basis(p, q), &s.gammas),
        v: solve(cos_basis(p, q), &s.betas),
    })
}

/// Initial schedule for level `p + 1` from an optimized level-`p` schedule:
/// transform with `q = p`, append a zero coefficient, evaluate at `p + 1`.
pub fn fourier_extend(prev: &ParamSchedule) -> Result<ParamSchedule> {
    let p = prev.p();
    let mut c = params_to_fourier(prev, p)?;
    c.u.push(0.0);
    c.v.push(0.0);
    fourier_to_params(&c, p + 1)
}
