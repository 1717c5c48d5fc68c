//! Coupling maps and greedy shortest-path SWAP routing.
//!
//! The router walks the circuit layer by layer. For every two-qubit gate whose
//! operands are not physically adjacent it moves the first operand along a
//! BFS shortest path with SWAPs until it neighbors the second, then emits the
//! gate. There is no lookahead. The emitted sequence is re-packed into layers
//! as soon as possible.

use std::collections::VecDeque;

use super::{Circuit, Gate};
use crate::graph::{find_chain, Chain, Graph};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMap {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl CouplingMap {
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            if a == b || a >= n || b >= n {
                return Err(Error::InvalidDims(format!("bad coupling ({a}, {b})")));
            }
            let e = (a.min(b), a.max(b));
            if !edges.contains(&e) {
                edges.push(e);
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }
        edges.sort_unstable();
        Ok(Self {
            n,
            edges,
            adjacency,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.bfs_parents(0).iter().all(Option::is_some)
    }

    fn bfs_parents(&self, from: usize) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.n];
        parent[from] = Some(from);
        let mut queue = VecDeque::from([from]);
        while let Some(q) = queue.pop_front() {
            for &nb in &self.adjacency[q] {
                if parent[nb].is_none() {
                    parent[nb] = Some(q);
                    queue.push_back(nb);
                }
            }
        }
        parent
    }

    /// Shortest path `from ..= to`, lowest-index neighbors explored first.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let parent = self.bfs_parents(from);
        parent[to]?;
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur].expect("visited");
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    fn as_graph(&self) -> Graph {
        Graph::unweighted(self.n, &self.edges).expect("coupling map is a simple graph")
    }
}

/// Nearest-neighbor line `0 - 1 - ... - (n-1)`.
pub fn linear_map(n: usize) -> Result<CouplingMap> {
    if n == 0 {
        return Err(Error::InvalidDims("linear map needs at least one qubit".into()));
    }
    let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    CouplingMap::new(n, &pairs)
}

/// Heavy-hex style lattice: `rows` lines of `cols` qubits, consecutive lines
/// joined through bridge qubits at columns `0, 4, 8, ...` (below even rows)
/// or `2, 6, 10, ...` (below odd rows). Line qubits have degree at most 3,
/// bridges degree 2.
pub fn heavy_hex_like(rows: usize, cols: usize) -> Result<CouplingMap> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidDims(format!("{rows} x {cols} lattice is empty")));
    }
    if rows > 1 && cols < 3 {
        return Err(Error::InvalidDims(format!(
            "need at least 3 columns to bridge {rows} rows"
        )));
    }
    let line = |r: usize, c: usize| r * cols + c;
    let mut pairs = Vec::new();
    for r in 0..rows {
        for c in 1..cols {
            pairs.push((line(r, c - 1), line(r, c)));
        }
    }
    let mut next = rows * cols;
    for r in 0..rows.saturating_sub(1) {
        let first = if r % 2 == 0 { 0 } else { 2 };
        for c in (first..cols).step_by(4) {
            pairs.push((line(r, c), next));
            pairs.push((next, line(r + 1, c)));
            next += 1;
        }
    }
    CouplingMap::new(next, &pairs)
}

/// Places chain vertex `i` on the `i`-th qubit of a physical path, the other
/// logical qubits on the remaining physical qubits in ascending order.
///
/// Returns the logical-to-physical layout.
pub fn chain_layout(chain: &Chain, n_logical: usize, map: &CouplingMap) -> Result<Vec<usize>> {
    if map.n() < n_logical {
        return Err(Error::Unroutable(format!(
            "{n_logical} logical qubits on {} physical",
            map.n()
        )));
    }
    let physical_path: Vec<usize> = if map.edges().iter().all(|&(a, b)| b == a + 1)
        && map.edges().len() + 1 == map.n()
    {
        (0..map.n()).collect()
    } else {
        find_chain(&map.as_graph(), 64, 0)?.vertices
    };
    if physical_path.len() < chain.len() {
        return Err(Error::Unroutable(format!(
            "longest physical path found has {} qubits, chain needs {}",
            physical_path.len(),
            chain.len()
        )));
    }
    let mut layout = vec![usize::MAX; n_logical];
    let mut taken = vec![false; map.n()];
    for (&v, &q) in chain.vertices.iter().zip(&physical_path) {
        layout[v] = q;
        taken[q] = true;
    }
    let mut free = (0..map.n()).filter(|&q| !taken[q]);
    for slot in layout.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = free.next().expect("enough physical qubits");
    }
    Ok(layout)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutedCircuit {
    /// Circuit over the physical qubits, SWAPs included.
    pub circuit: Circuit,
    pub logical_n: usize,
    /// Logical-to-physical placement before the first gate.
    pub initial_layout: Vec<usize>,
    /// Logical-to-physical placement after the last gate.
    pub final_permutation: Vec<usize>,
    pub swaps: usize,
}

impl RoutedCircuit {
    /// Logical bits of a physical measurement outcome.
    pub fn logical_bits(&self, physical: &[u8]) -> Vec<u8> {
        self.final_permutation.iter().map(|&p| physical[p]).collect()
    }
}

pub fn route_greedy(
    c: &Circuit,
    map: &CouplingMap,
    layout: Option<&[usize]>,
) -> Result<RoutedCircuit> {
    let n = c.n();
    if map.n() < n {
        return Err(Error::Unroutable(format!(
            "{n} logical qubits on {} physical",
            map.n()
        )));
    }
    let initial: Vec<usize> = match layout {
        Some(l) => l.to_vec(),
        None => (0..n).collect(),
    };
    check_layout(&initial, n, map.n())?;

    let mut pos = initial.clone();
    let mut occupant: Vec<Option<usize>> = vec![None; map.n()];
    for (q, &p) in pos.iter().enumerate() {
        occupant[p] = Some(q);
    }

    let mut out = Vec::new();
    let mut swaps = 0;
    for gate in c.gates() {
        if let (a, Some(b)) = gate.qubits() {
            if !map.adjacent(pos[a], pos[b]) {
                let path = map.shortest_path(pos[a], pos[b]).ok_or_else(|| {
                    Error::Unroutable(format!(
                        "physical qubits {} and {} are disconnected",
                        pos[a], pos[b]
                    ))
                })?;
                for hop in path.windows(2).take(path.len() - 2) {
                    let (x, y) = (hop[0], hop[1]);
                    out.push(Gate::Swap(x, y));
                    swaps += 1;
                    occupant.swap(x, y);
                    for p in [x, y] {
                        if let Some(q) = occupant[p] {
                            pos[q] = p;
                        }
                    }
                }
            }
        }
        out.push(gate.remap(&pos));
    }
    let circuit = Circuit::from_sequence(map.n(), &out, c.param_slots())?;
    Ok(RoutedCircuit {
        circuit,
        logical_n: n,
        initial_layout: initial,
        final_permutation: pos,
        swaps,
    })
}

fn check_layout(layout: &[usize], n: usize, physical: usize) -> Result<()> {
    if layout.len() != n {
        return Err(Error::Unroutable(format!(
            "layout covers {} of {n} logical qubits",
            layout.len()
        )));
    }
    let mut seen = vec![false; physical];
    for &p in layout {
        if p >= physical || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Unroutable(format!("layout entry {p} invalid or repeated")));
        }
    }
    Ok(())
}
