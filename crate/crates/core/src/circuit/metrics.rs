use serde::{Deserialize, Serialize};

use super::{Circuit, Gate};

/// Per-gate durations in seconds. A SWAP costs `swap_natives` two-qubit
/// native gates in both count and time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DurationModel {
    pub t_1q: f64,
    pub t_2q: f64,
    pub swap_natives: usize,
}

impl Default for DurationModel {
    fn default() -> Self {
        Self {
            t_1q: 50e-9,
            t_2q: 300e-9,
            swap_natives: 3,
        }
    }
}

impl DurationModel {
    pub fn t_swap(&self) -> f64 {
        self.swap_natives as f64 * self.t_2q
    }

    pub fn gate_duration(&self, g: &Gate) -> f64 {
        match g {
            Gate::H(_) | Gate::Rx(..) => self.t_1q,
            Gate::Rzz(..) => self.t_2q,
            Gate::Swap(..) => self.t_swap(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitMetrics {
    /// RZZ gates plus `swap_natives` per SWAP.
    pub two_qubit_count: usize,
    pub swap_count: usize,
    pub depth: usize,
    /// Sum over layers of the slowest gate in the layer, seconds.
    pub duration: f64,
}

pub fn metrics(c: &Circuit, model: &DurationModel) -> CircuitMetrics {
    let swap_count = c.count("SWAP");
    CircuitMetrics {
        two_qubit_count: c.count("RZZ") + model.swap_natives * swap_count,
        swap_count,
        depth: c.depth(),
        duration: c
            .layers()
            .iter()
            .map(|l| l.iter().map(|g| model.gate_duration(g)).fold(0.0, f64::max))
            .sum(),
    }
}
