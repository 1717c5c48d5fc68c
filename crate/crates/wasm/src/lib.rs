//! Browser bindings for the demo page in `www/`.
//!
//! Three operations: the p = 1 energy landscape of an instance, gate-count
//! scaling of LC versus routed original QAOA, and an end-to-end solve with
//! its AR histograms. Results cross the boundary as `Float64Array`s or JSON
//! strings.

use lcqaoa::circuit::{
    build_lc_ansatz, build_original_ansatz, linear_map, metrics, route_greedy, DurationModel,
};
use lcqaoa::graph::{find_chain, generate_random_regular};
use lcqaoa::harness::{run_solve, AnsatzKind, ExperimentConfig, InstanceConfig};
use lcqaoa::vqa::{make_objective, EvalMode, Instance};
use wasm_bindgen::prelude::*;

fn js(e: lcqaoa::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn ansatz_kind(name: &str) -> lcqaoa::Result<AnsatzKind> {
    name.parse()
}

/// Expected AR over a `steps x steps` grid, `γ ∈ [0, π)` by rows and
/// `β ∈ [0, π/2)` by columns.
pub fn landscape_grid(n: usize, d: usize, seed: u64, ansatz: &str, steps: usize) -> lcqaoa::Result<Vec<f64>> {
    let g = generate_random_regular(n, d, seed, false)?;
    let inst = Instance::new(g.clone())?;
    let circuit = match ansatz_kind(ansatz)? {
        AnsatzKind::Original => build_original_ansatz(&g, 1)?,
        AnsatzKind::Lc => build_lc_ansatz(&g, &find_chain(&g, 32, seed)?, 1)?,
    };
    let f = make_objective(&circuit, &inst.cost, EvalMode::Exact)?;
    let mut out = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        let gamma = std::f64::consts::PI * i as f64 / steps as f64;
        for j in 0..steps {
            let beta = std::f64::consts::FRAC_PI_2 * j as f64 / steps as f64;
            out.push(inst.ar_of_energy(f.exact(&[gamma, beta])?));
        }
    }
    Ok(out)
}

/// One JSON row per even `n` in `[n_min, n_max]`: LC and routed-original
/// two-qubit counts, depths and durations at p = 1.
pub fn scaling_rows(d: usize, n_min: usize, n_max: usize, seed: u64) -> lcqaoa::Result<String> {
    let model = DurationModel::default();
    let mut rows = Vec::new();
    for n in (n_min.max(d + 1)..=n_max).filter(|n| n * d % 2 == 0) {
        let g = generate_random_regular(n, d, seed, false)?;
        let chain = find_chain(&g, 32, seed)?;
        let lc = metrics(&build_lc_ansatz(&g, &chain, 1)?, &model);
        let routed = route_greedy(&build_original_ansatz(&g, 1)?, &linear_map(n)?, None)?;
        let orig = metrics(&routed.circuit, &model);
        rows.push(serde_json::json!({
            "n": n,
            "edges": g.edges().len(),
            "chain_length": chain.len(),
            "lc": lc,
            "original": orig,
        }));
    }
    Ok(serde_json::Value::Array(rows).to_string())
}

/// Full solve report as JSON.
pub fn solve_report(n: usize, d: usize, seed: u64, ansatz: &str, p: usize, shots: u64) -> lcqaoa::Result<String> {
    let mut cfg = ExperimentConfig::new(InstanceConfig::random(n, d, seed), ansatz_kind(ansatz)?, p);
    cfg.shots = shots;
    cfg.sample_seed = seed;
    cfg.fourier_ladder = p > 1;
    let mut report = run_solve(&cfg)?;
    report.history.clear();
    report.counts.clear();
    Ok(report.to_json())
}

#[wasm_bindgen]
pub fn landscape(n: usize, d: usize, seed: u32, ansatz: &str, steps: usize) -> Result<Vec<f64>, JsError> {
    landscape_grid(n, d, seed as u64, ansatz, steps).map_err(js)
}

#[wasm_bindgen]
pub fn scaling(d: usize, n_min: usize, n_max: usize, seed: u32) -> Result<String, JsError> {
    scaling_rows(d, n_min, n_max, seed as u64).map_err(js)
}

#[wasm_bindgen]
pub fn solve(n: usize, d: usize, seed: u32, ansatz: &str, p: usize, shots: u32) -> Result<String, JsError> {
    solve_report(n, d, seed as u64, ansatz, p, shots as u64).map_err(js)
}
