//! Layered gate IR for QAOA circuits.
//!
//! Angles follow `RZZ(θ) = exp(-i θ/2 Z⊗Z)` and `RX(θ) = exp(-i θ/2 X)`.
//! Variational angles are bound through parameter slots: slot `2k` is `γ_k`
//! and slot `2k + 1` is `β_k` (zero-based layer `k`).

mod ansatz;
mod metrics;
mod routing;

pub use ansatz::{build_lc_ansatz, build_original_ansatz, gamma_slot, beta_slot};
pub use metrics::{metrics, CircuitMetrics, DurationModel};
pub use routing::{
    chain_layout, heavy_hex_like, linear_map, route_greedy, CouplingMap, RoutedCircuit,
};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A rotation angle, either fixed or `scale * params[slot]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Fixed(f64),
    Slot { slot: usize, scale: f64 },
}

impl Angle {
    pub fn resolve(&self, params: &[f64]) -> f64 {
        match *self {
            Angle::Fixed(theta) => theta,
            Angle::Slot { slot, scale } => scale * params[slot],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    Rx(usize, Angle),
    Rzz(usize, usize, Angle),
    Swap(usize, usize),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::Rx(..) => "RX",
            Gate::Rzz(..) => "RZZ",
            Gate::Swap(..) => "SWAP",
        }
    }

    /// Qubits acted on; the second entry is set for two-qubit gates.
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::Rx(q, _) => (q, None),
            Gate::Rzz(a, b, _) | Gate::Swap(a, b) => (a, Some(b)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().1.is_some()
    }

    pub fn angle(&self) -> Option<Angle> {
        match *self {
            Gate::Rx(_, a) | Gate::Rzz(_, _, a) => Some(a),
            _ => None,
        }
    }

    /// Same gate acting on `map[q]` instead of `q`.
    pub fn remap(&self, map: &[usize]) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(map[q]),
            Gate::Rx(q, a) => Gate::Rx(map[q], a),
            Gate::Rzz(x, y, a) => Gate::Rzz(map[x], map[y], a),
            Gate::Swap(x, y) => Gate::Swap(map[x], map[y]),
        }
    }

    fn for_each_qubit(&self, mut f: impl FnMut(usize)) {
        let (a, b) = self.qubits();
        f(a);
        if let Some(b) = b {
            f(b);
        }
    }
}

/// Ordered layers of gates; gates within a layer touch disjoint qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n: usize,
    layers: Vec<Vec<Gate>>,
    param_slots: usize,
}

impl Circuit {
    /// Checks qubit ranges, per-layer disjointness, angle finiteness and slot
    /// references. Empty layers are dropped.
    pub fn new(n: usize, layers: Vec<Vec<Gate>>, param_slots: usize) -> Result<Self> {
        let layers: Vec<Vec<Gate>> = layers.into_iter().filter(|l| !l.is_empty()).collect();
        for (li, layer) in layers.iter().enumerate() {
            let mut used = vec![false; n];
            for gate in layer {
                let mut problem = None;
                gate.for_each_qubit(|q| {
                    if q >= n {
                        problem = Some(format!("qubit {q} out of range"));
                    } else if std::mem::replace(&mut used[q], true) {
                        problem = Some(format!("qubit {q} used twice"));
                    }
                });
                match gate.angle() {
                    Some(Angle::Fixed(t)) if !t.is_finite() => {
                        problem = Some("non-finite angle".into())
                    }
                    Some(Angle::Slot { slot, scale }) if slot >= param_slots || !scale.is_finite() => {
                        problem = Some(format!("bad parameter slot {slot}"))
                    }
                    _ => {}
                }
                if let Some(p) = problem {
                    return Err(Error::InvalidParams(format!(
                        "layer {li}, {} gate: {p}",
                        gate.name()
                    )));
                }
            }
        }
        Ok(Self {
            n,
            layers,
            param_slots,
        })
    }

    /// Packs a gate sequence into layers as-soon-as-possible; per-qubit gate
    /// order is preserved.
    pub fn from_sequence(n: usize, gates: &[Gate], param_slots: usize) -> Result<Self> {
        let mut next_free = vec![0usize; n];
        let mut layers: Vec<Vec<Gate>> = Vec::new();
        for g in gates {
            let mut at = 0;
            g.for_each_qubit(|q| at = at.max(next_free.get(q).copied().unwrap_or(0)));
            g.for_each_qubit(|q| {
                if q < n {
                    next_free[q] = at + 1
                }
            });
            if layers.len() <= at {
                layers.resize_with(at + 1, Vec::new);
            }
            layers[at].push(*g);
        }
        Self::new(n, layers, param_slots)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn param_slots(&self) -> usize {
        self.param_slots
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> + '_ {
        self.layers.iter().flatten()
    }

    pub fn count(&self, name: &str) -> usize {
        self.gates().filter(|g| g.name() == name).count()
    }

    /// JSON list of layers, each a list of `{kind, qubits, theta | slot}`.
    pub fn to_json(&self) -> String {
        let layers: Vec<Vec<GateRecord>> = self
            .layers
            .iter()
            .map(|l| l.iter().map(GateRecord::from).collect())
            .collect();
        serde_json::to_string_pretty(&layers).expect("circuit serializes")
    }

    pub fn from_json(n: usize, param_slots: usize, text: &str) -> Result<Self> {
        let layers: Vec<Vec<GateRecord>> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let layers = layers
            .into_iter()
            .map(|l| l.into_iter().map(Gate::try_from).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, layers, param_slots)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GateRecord {
    kind: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slot: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<f64>,
}

impl From<&Gate> for GateRecord {
    fn from(g: &Gate) -> Self {
        let (a, b) = g.qubits();
        let qubits = std::iter::once(a).chain(b).collect();
        let (theta, slot, scale) = match g.angle() {
            Some(Angle::Fixed(t)) => (Some(t), None, None),
            Some(Angle::Slot { slot, scale }) => (None, Some(slot), Some(scale)),
            None => (None, None, None),
        };
        Self {
            kind: g.name().to_string(),
            qubits,
            theta,
            slot,
            scale,
        }
    }
}

impl TryFrom<GateRecord> for Gate {
    type Error = Error;

    fn try_from(r: GateRecord) -> Result<Gate> {
        let angle = match (r.theta, r.slot) {
            (Some(t), None) => Some(Angle::Fixed(t)),
            (None, Some(slot)) => Some(Angle::Slot {
                slot,
                scale: r.scale.unwrap_or(1.0),
            }),
            (None, None) => None,
            (Some(_), Some(_)) => {
                return Err(Error::Parse("gate has both theta and slot".into()))
            }
        };
        let bad = || Error::Parse(format!("malformed {} gate {:?}", r.kind, r.qubits));
        match (r.kind.as_str(), r.qubits.as_slice(), angle) {
            ("H", &[q], None) => Ok(Gate::H(q)),
            ("RX", &[q], Some(a)) => Ok(Gate::Rx(q, a)),
            ("RZZ", &[a, b], Some(t)) if a != b => Ok(Gate::Rzz(a, b, t)),
            ("SWAP", &[a, b], None) if a != b => Ok(Gate::Swap(a, b)),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_overlapping_layer() {
        let layer = vec![Gate::H(0), Gate::Rzz(0, 1, Angle::Fixed(0.1))];
        assert!(Circuit::new(2, vec![layer], 0).is_err());
    }

    #[test]
    fn rejects_missing_slot() {
        let layer = vec![Gate::Rx(0, Angle::Slot { slot: 2, scale: 2.0 })];
        assert!(Circuit::new(1, vec![layer], 2).is_err());
    }

    #[test]
    fn asap_packing_respects_qubit_order() {
        let gates = [
            Gate::H(0),
            Gate::H(1),
            Gate::Rzz(0, 1, Angle::Fixed(0.3)),
            Gate::H(2),
            Gate::Swap(1, 2),
        ];
        let c = Circuit::from_sequence(3, &gates, 0).unwrap();
        assert_eq!(c.depth(), 3);
        assert_eq!(c.layers()[0].len(), 3);
        assert_eq!(c.layers()[2], vec![Gate::Swap(1, 2)]);
    }

    #[test]
    fn json_round_trip() {
        let c = Circuit::new(
            3,
            vec![
                vec![Gate::H(0), Gate::H(1), Gate::H(2)],
                vec![Gate::Rzz(0, 1, Angle::Slot { slot: 0, scale: 2.0 })],
                vec![Gate::Swap(1, 2), Gate::Rx(0, Angle::Fixed(0.5))],
            ],
            2,
        )
        .unwrap();
        let text = c.to_json();
        assert!(text.contains("\"kind\": \"RZZ\""));
        assert_eq!(Circuit::from_json(3, 2, &text).unwrap(), c);
    }
}
