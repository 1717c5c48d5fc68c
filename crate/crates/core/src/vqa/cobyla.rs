//! Derivative-free minimization by linear approximation in a trust region,
//! following the structure of Powell's COBYLA without constraints.
//!
//! The method keeps a simplex of `n + 1` evaluated points and interpolates a
//! linear model through them. Each iteration steps `rho` along the model's
//! steepest descent from the best vertex and swaps the trial point into the
//! simplex where it keeps the simplex volume largest. When steps stop paying
//! off and the simplex is well shaped, `rho` halves; the run ends once a
//! reduction is requested at `rho = tol`.
//!
//! The initial simplex uses the directions `e_i + ½ Σ_{j>i} e_j - ½ Σ_{j<i} e_j`
//! (scaled to length `rho`) instead of the coordinate axes. Their sign
//! patterns differ between vertices, which matters for QAOA objectives: from
//! the all-zero start every coordinate axis is flat, so an axis-aligned
//! simplex sees a zero model gradient and never moves.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Trust-region reduction ratio below which a step counts as poor.
const POOR_RATIO: f64 = 0.1;
/// Acceptable simplex: every vertex within `FAR * rho` of the best one...
const FAR: f64 = 2.1;
/// ...and at least `THIN * rho` from its opposite face.
const THIN: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CobylaOptions {
    pub rho_begin: f64,
    pub tol: f64,
    /// Cap on objective evaluations; `None` runs to convergence.
    pub max_iter: Option<usize>,
}

impl Default for CobylaOptions {
    fn default() -> Self {
        Self {
            rho_begin: 1.0,
            tol: 1e-3,
            max_iter: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub iteration: usize,
    pub params: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptRun {
    /// Every objective evaluation in order.
    pub history: Vec<Evaluation>,
    pub final_params: Vec<f64>,
    pub final_value: f64,
    /// Objective evaluations spent.
    pub iterations: usize,
    pub converged: bool,
    pub max_iter_exceeded: bool,
}

struct Search<F> {
    f: F,
    history: Vec<Evaluation>,
    max_iter: Option<usize>,
}

impl<F: FnMut(&[f64]) -> f64> Search<F> {
    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.max_iter.is_some_and(|m| self.history.len() >= m) {
            return None;
        }
        let raw = (self.f)(x);
        let value = if raw.is_nan() { f64::INFINITY } else { raw };
        self.history.push(Evaluation {
            iteration: self.history.len(),
            params: x.to_vec(),
            value,
        });
        Some(value)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn initial_direction(i: usize, n: usize, rho: f64) -> Vec<f64> {
    let d: Vec<f64> = (0..n)
        .map(|j| match j.cmp(&i) {
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Greater => 0.5,
            std::cmp::Ordering::Less => -0.5,
        })
        .collect();
    let len = norm(&d);
    d.into_iter().map(|x| rho * x / len).collect()
}

pub fn minimize_cobyla_like<F>(f: F, x0: &[f64], opts: &CobylaOptions) -> OptRun
where
    F: FnMut(&[f64]) -> f64,
{
    assert!(opts.tol > 0.0, "tol must be positive");
    let n = x0.len();
    let mut search = Search {
        f,
        history: Vec::new(),
        max_iter: opts.max_iter,
    };
    let finish = |search: Search<F>, x: Vec<f64>, fx: f64, converged: bool| OptRun {
        iterations: search.history.len(),
        history: search.history,
        final_params: x,
        final_value: fx,
        converged,
        max_iter_exceeded: !converged,
    };

    let Some(f0) = search.eval(x0) else {
        return finish(search, x0.to_vec(), f64::NAN, false);
    };
    if n == 0 {
        return finish(search, Vec::new(), f0, true);
    }

    let mut rho = opts.rho_begin.max(opts.tol);
    let mut points = vec![x0.to_vec()];
    let mut values = vec![f0];
    for i in 0..n {
        let x: Vec<f64> = x0
            .iter()
            .zip(initial_direction(i, n, rho))
            .map(|(a, d)| a + d)
            .collect();
        let Some(fx) = search.eval(&x) else {
            return finish(search, x0.to_vec(), f0, false);
        };
        points.push(x);
        values.push(fx);
    }
    let mut best = 0;
    for j in 1..=n {
        if values[j] < values[best] {
            best = j;
        }
    }

    // Set after a poor trial step: the next pass repairs geometry or shrinks rho.
    let mut after_poor = false;
    loop {
        let others: Vec<usize> = (0..=n).filter(|&j| j != best).collect();
        let xb = points[best].clone();
        let fb = values[best];
        let offsets = DMatrix::from_fn(n, n, |r, c| points[others[r]][c] - xb[c]);
        let Some(inverse) = offsets.clone().try_inverse() else {
            // Collapsed simplex: rebuild around the best point.
            for (k, &j) in others.iter().enumerate() {
                let d = initial_direction(k, n, rho);
                points[j] = xb.iter().zip(d).map(|(a, b)| a + b).collect();
                match search.eval(&points[j]) {
                    Some(v) => values[j] = v,
                    None => return finish(search, xb, fb, false),
                }
            }
            best = (0..=n).fold(best, |b, j| if values[j] < values[b] { j } else { b });
            continue;
        };
        let df = DVector::from_fn(n, |r, _| values[others[r]] - fb);
        let gradient = &inverse * df;
        let gnorm = gradient.norm();
        let step_ok = gnorm.is_finite() && gnorm > 0.0;

        if after_poor || !step_ok {
            after_poor = false;
            // Column k of the inverse is normal to the face opposite vertex k;
            // its reciprocal length is the vertex's distance from that face.
            let dist: Vec<f64> = (0..n).map(|r| offsets.row(r).norm()).collect();
            let sigma: Vec<f64> = (0..n).map(|k| 1.0 / inverse.column(k).norm()).collect();
            let far = (0..n)
                .filter(|&k| dist[k] > FAR * rho)
                .max_by(|&a, &b| dist[a].total_cmp(&dist[b]));
            let thin = (0..n)
                .filter(|&k| sigma[k] < THIN * rho)
                .min_by(|&a, &b| sigma[a].total_cmp(&sigma[b]));
            if let Some(k) = far.or(thin) {
                // Move the offending vertex half a radius along its face normal,
                // on the side the model says is downhill.
                let normal = inverse.column(k).into_owned();
                let mut dir = &normal / normal.norm();
                if step_ok && gradient.dot(&dir) > 0.0 {
                    dir = -dir;
                }
                let x: Vec<f64> = xb.iter().zip(dir.iter()).map(|(a, d)| a + 0.5 * rho * d).collect();
                let Some(fx) = search.eval(&x) else {
                    return finish(search, xb, fb, false);
                };
                let j = others[k];
                points[j] = x;
                values[j] = fx;
                if fx < fb {
                    best = j;
                }
                continue;
            }
            if rho <= opts.tol {
                return finish(search, xb, fb, true);
            }
            rho *= 0.5;
            if rho <= 1.5 * opts.tol {
                rho = opts.tol;
            }
            continue;
        }

        let step: Vec<f64> = gradient.iter().map(|g| -rho * g / gnorm).collect();
        let trial: Vec<f64> = xb.iter().zip(&step).map(|(a, s)| a + s).collect();
        let Some(ft) = search.eval(&trial) else {
            return finish(search, xb, fb, false);
        };
        let ratio = (fb - ft) / (rho * gnorm);
        after_poor = ratio < POOR_RATIO;

        // s = Σ t_k (x_k - x_b): replacing vertex k scales the simplex volume by
        // |t_k|, replacing the best vertex by |1 - Σ t_k|. Far vertices are
        // favoured for replacement.
        let t = inverse.transpose() * DVector::from_vec(step);
        let improved = ft < fb;
        let anchor = if improved { &trial } else { &xb };
        let weight = |x: &[f64]| {
            let d = norm(&x.iter().zip(anchor).map(|(a, b)| a - b).collect::<Vec<_>>());
            if d > rho {
                (d / rho).powi(3)
            } else {
                1.0
            }
        };
        let mut choice: Option<(usize, f64)> = None;
        for (k, &j) in others.iter().enumerate() {
            let score = t[k].abs() * weight(&points[j]);
            if choice.is_none_or(|(_, s)| score > s) {
                choice = Some((j, score));
            }
        }
        if improved {
            let score = (1.0 - t.sum()).abs() * weight(&xb);
            if choice.is_none_or(|(_, s)| score > s) {
                choice = Some((best, score));
            }
        }
        if let Some((j, score)) = choice {
            if improved || score > 1e-8 {
                points[j] = trial;
                values[j] = ft;
                if improved {
                    best = j;
                }
            }
        }
    }
}
