use super::{Angle, Circuit, Gate};
use crate::graph::{Chain, Graph};
use crate::{Error, Result};

pub fn gamma_slot(layer: usize) -> usize {
    2 * layer
}

pub fn beta_slot(layer: usize) -> usize {
    2 * layer + 1
}

fn cost_gate(u: usize, v: usize, w: f64, layer: usize) -> Gate {
    Gate::Rzz(
        u,
        v,
        Angle::Slot {
            slot: gamma_slot(layer),
            scale: 2.0 * w,
        },
    )
}

fn mixer_layer(n: usize, layer: usize) -> Vec<Gate> {
    (0..n)
        .map(|q| {
            Gate::Rx(
                q,
                Angle::Slot {
                    slot: beta_slot(layer),
                    scale: 2.0,
                },
            )
        })
        .collect()
}

/// One RZZ per graph edge in every cost block, packed first-fit in edge order
/// into qubit-disjoint sub-layers, each block followed by an RX mixer.
pub fn build_original_ansatz(g: &Graph, p: usize) -> Result<Circuit> {
    if p == 0 {
        return Err(Error::InvalidParams("p must be at least 1".into()));
    }
    let n = g.n();
    let mut layers = vec![(0..n).map(Gate::H).collect::<Vec<_>>()];
    for k in 0..p {
        let mut sub: Vec<(Vec<Gate>, Vec<bool>)> = Vec::new();
        for e in g.edges() {
            let gate = cost_gate(e.u, e.v, e.w, k);
            match sub.iter_mut().find(|(_, used)| !used[e.u] && !used[e.v]) {
                Some((gates, used)) => {
                    gates.push(gate);
                    used[e.u] = true;
                    used[e.v] = true;
                }
                None => {
                    let mut used = vec![false; n];
                    used[e.u] = true;
                    used[e.v] = true;
                    sub.push((vec![gate], used));
                }
            }
        }
        layers.extend(sub.into_iter().map(|(gates, _)| gates));
        layers.push(mixer_layer(n, k));
    }
    Circuit::new(n, layers, 2 * p)
}

/// RZZ gates only along the chain, scheduled as a two-sub-layer brick wall
/// (even chain positions, then odd), followed by an RX mixer on every qubit.
pub fn build_lc_ansatz(g: &Graph, chain: &Chain, p: usize) -> Result<Circuit> {
    if p == 0 {
        return Err(Error::InvalidParams("p must be at least 1".into()));
    }
    // Re-validate against this graph; the chain may come from elsewhere.
    let chain = Chain::new(g, chain.vertices.clone())?;
    let n = g.n();
    let weight = |u: usize, v: usize| {
        g.neighbors(u)
            .iter()
            .find(|&&(x, _)| x == v)
            .map(|&(_, w)| w)
            .expect("chain edges are graph edges")
    };
    let mut layers = vec![(0..n).map(Gate::H).collect::<Vec<_>>()];
    for k in 0..p {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for (pos, (u, v)) in chain.edges().enumerate() {
            let gate = cost_gate(u.min(v), u.max(v), weight(u, v), k);
            if pos % 2 == 0 {
                even.push(gate);
            } else {
                odd.push(gate);
            }
        }
        layers.push(even);
        layers.push(odd);
        layers.push(mixer_layer(n, k));
    }
    Circuit::new(n, layers, 2 * p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_random_regular;

    fn k4() -> Graph {
        Graph::unweighted(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn path_graph(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::unweighted(n, &pairs).unwrap()
    }

    #[test]
    fn original_gate_counts() {
        let c = build_original_ansatz(&k4(), 2).unwrap();
        assert_eq!(c.count("H"), 4);
        assert_eq!(c.count("RZZ"), 12);
        assert_eq!(c.count("RX"), 8);
        assert_eq!(c.param_slots(), 4);

        let g = generate_random_regular(100, 3, 1, false).unwrap();
        assert_eq!(build_original_ansatz(&g, 1).unwrap().count("RZZ"), 150);
    }

    #[test]
    fn original_single_edge_sequence() {
        let g = Graph::unweighted(2, &[(0, 1)]).unwrap();
        let c = build_original_ansatz(&g, 1).unwrap();
        let names: Vec<_> = c.gates().map(|g| g.name()).collect();
        assert_eq!(names, ["H", "H", "RZZ", "RX", "RX"]);
    }

    #[test]
    fn original_cost_angle_scales_with_weight() {
        let g = Graph::weighted(2, &[(0, 1, 0.75)]).unwrap();
        let c = build_original_ansatz(&g, 1).unwrap();
        let rzz = c.gates().find(|g| g.name() == "RZZ").unwrap();
        assert_eq!(rzz.angle().unwrap().resolve(&[0.4, 0.0]), 2.0 * 0.4 * 0.75);
    }

    #[test]
    fn lc_brick_wall_split() {
        let g = path_graph(8);
        let chain = Chain::new(&g, (0..8).collect()).unwrap();
        let c = build_lc_ansatz(&g, &chain, 1).unwrap();
        assert_eq!(c.count("RZZ"), 7);
        assert_eq!(c.layers()[1].len(), 4);
        assert_eq!(c.layers()[2].len(), 3);
        assert_eq!(c.depth(), 4);
    }

    #[test]
    fn lc_single_edge_chain() {
        let g = path_graph(2);
        let chain = Chain::new(&g, vec![0, 1]).unwrap();
        let c = build_lc_ansatz(&g, &chain, 1).unwrap();
        assert_eq!(c.count("RZZ"), 1);
        assert_eq!(c.depth(), 3);
    }

    #[test]
    fn lc_counts_and_depth() {
        for len in [3, 5, 10] {
            let g = path_graph(12);
            let chain = Chain::new(&g, (0..len).collect()).unwrap();
            for p in 1..4 {
                let c = build_lc_ansatz(&g, &chain, p).unwrap();
                assert_eq!(c.count("RZZ"), (len - 1) * p);
                assert_eq!(c.depth(), 1 + 3 * p);
                assert_eq!(c.count("RX"), 12 * p);
            }
        }
    }

    #[test]
    fn lc_rejects_foreign_chain() {
        let g = path_graph(4);
        let other = Graph::unweighted(4, &[(0, 2), (2, 1)]).unwrap();
        let chain = Chain::new(&other, vec![0, 2, 1]).unwrap();
        assert!(matches!(
            build_lc_ansatz(&g, &chain, 1),
            Err(Error::ChainInvalid(_))
        ));
    }

    #[test]
    fn zero_layers_rejected() {
        assert!(build_original_ansatz(&k4(), 0).is_err());
    }
}
