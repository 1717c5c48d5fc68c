//! Weighted MaxCut graphs, cut evaluation, the exact MaxCut oracle and the
//! greedy longest-chain search.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::rng::{mix64, Stream};
use crate::{bits, Error, Result};

/// Edge weights drawn for weighted instances.
pub const WEIGHT_PALETTE: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

/// Restart budget of the pairing model.
pub const MAX_GENERATION_ATTEMPTS: usize = 1000;

/// Default vertex limit of [`exact_maxcut`].
pub const EXACT_MAXCUT_LIMIT: usize = 24;

/// Below this size [`exact_maxcut`] enumerates instead of branching.
const ENUMERATION_CUTOFF: usize = 16;

pub const DEFAULT_CHAIN_RESTARTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GraphMeta {
    #[serde(default)]
    pub generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub weighted: bool,
}

/// Undirected simple graph with positive edge weights.
///
/// Edges are stored with `u < v`, sorted, without duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    meta: GraphMeta,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl Graph {
    /// Builds a graph, checking every invariant. Edges may be given in any
    /// order but each must already satisfy `u < v`.
    pub fn new(n: usize, mut edges: Vec<Edge>, meta: GraphMeta) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            check_edge(n, e).map_err(|m| Error::InvalidGraph(format!("edges[{i}]: {m}")))?;
        }
        edges.sort_by(|a, b| (a.u, a.v).cmp(&(b.u, b.v)));
        if let Some(w) = edges.windows(2).find(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v)) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].u, w[0].v
            )));
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.u].push((e.v, e.w));
            adjacency[e.v].push((e.u, e.w));
        }
        if let Some(d) = meta.degree {
            if let Some(v) = (0..n).find(|&v| adjacency[v].len() != d) {
                return Err(Error::InvalidGraph(format!(
                    "meta.degree = {d} but vertex {v} has degree {}",
                    adjacency[v].len()
                )));
            }
        }
        Ok(Self {
            n,
            edges,
            meta,
            adjacency,
        })
    }

    /// Unit-weight graph from vertex pairs in either orientation.
    pub fn unweighted(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::weighted(n, &pairs.iter().map(|&(u, v)| (u, v, 1.0)).collect::<Vec<_>>())
    }

    /// Graph from `(u, v, w)` triples in either orientation.
    pub fn weighted(n: usize, triples: &[(usize, usize, f64)]) -> Result<Self> {
        let edges = triples
            .iter()
            .map(|&(a, b, w)| Edge {
                u: a.min(b),
                v: a.max(b),
                w,
            })
            .collect();
        let weighted = triples.iter().any(|t| t.2 != 1.0);
        Self::new(
            n,
            edges,
            GraphMeta {
                generator: "explicit".into(),
                weighted,
                ..Default::default()
            },
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn meta(&self) -> &GraphMeta {
        &self.meta
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency
            .get(u)
            .is_some_and(|nb| nb.iter().any(|&(x, _)| x == v))
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Minimum edge weight, or `None` for an edgeless graph.
    pub fn min_weight(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.w).reduce(f64::min)
    }

    /// Structural fingerprint used to tie a [`Chain`] to its graph.
    pub fn fingerprint(&self) -> u64 {
        self.edges.iter().fold(mix64(self.n as u64), |h, e| {
            mix64(h ^ mix64(((e.u as u64) << 32) | e.v as u64) ^ e.w.to_bits())
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphFile::from(self)).expect("graph serializes")
    }

    /// Parses the JSON graph format, rejecting any invariant violation with
    /// the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        for (i, &(u, v, w)) in file.edges.iter().enumerate() {
            check_edge(file.n, &Edge { u, v, w })
                .map_err(|m| Error::InvalidGraph(format!("edges[{i}]: {m}")))?;
        }
        let edges = file.edges.iter().map(|&(u, v, w)| Edge { u, v, w }).collect();
        Self::new(file.n, edges, file.meta)
    }
}

fn check_edge(n: usize, e: &Edge) -> std::result::Result<(), String> {
    if e.u == e.v {
        return Err(format!("self-loop on vertex {}", e.u));
    }
    if e.u > e.v {
        return Err(format!("endpoints must satisfy u < v, got ({}, {})", e.u, e.v));
    }
    if e.v >= n {
        return Err(format!("vertex {} out of range for n = {n}", e.v));
    }
    if !(e.w.is_finite() && e.w > 0.0) {
        return Err(format!("weight must be positive and finite, got {}", e.w));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    #[serde(default)]
    meta: GraphMeta,
}

impl From<&Graph> for GraphFile {
    fn from(g: &Graph) -> Self {
        Self {
            n: g.n,
            edges: g.edges.iter().map(|e| (e.u, e.v, e.w)).collect(),
            meta: g.meta.clone(),
        }
    }
}

/// Random `d`-regular graph from the pairing (configuration) model.
///
/// Stubs are shuffled and paired; pairs that would form a self-loop or a
/// repeated edge are rejected and their stubs re-paired in the next round.
/// A round that can no longer complete restarts the attempt. Weighted graphs
/// then draw each edge weight from [`WEIGHT_PALETTE`] in sorted edge order.
pub fn generate_random_regular(n: usize, d: usize, seed: u64, weighted: bool) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("need n >= 2, got {n}")));
    }
    if d >= n {
        return Err(Error::InvalidParams(format!("degree {d} must be below n = {n}")));
    }
    if (n * d) % 2 != 0 {
        return Err(Error::InvalidParams(format!("n * d = {} is odd", n * d)));
    }
    let mut rng = Stream::new(seed);
    for _ in 0..MAX_GENERATION_ATTEMPTS {
        if let Some(pairs) = try_pairing(n, d, &mut rng) {
            let edges = pairs
                .into_iter()
                .map(|(u, v)| Edge {
                    u,
                    v,
                    w: if weighted {
                        WEIGHT_PALETTE[rng.below(WEIGHT_PALETTE.len() as u64) as usize]
                    } else {
                        1.0
                    },
                })
                .collect();
            return Graph::new(
                n,
                edges,
                GraphMeta {
                    generator: "random_regular".into(),
                    degree: Some(d),
                    seed: Some(seed),
                    weighted,
                },
            );
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_GENERATION_ATTEMPTS,
    })
}

fn try_pairing(n: usize, d: usize, rng: &mut Stream) -> Option<BTreeSet<(usize, usize)>> {
    let mut edges = BTreeSet::new();
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    while !stubs.is_empty() {
        let mut leftover: BTreeMap<usize, usize> = BTreeMap::new();
        rng.shuffle(&mut stubs);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a != b && !edges.contains(&(a, b)) {
                edges.insert((a, b));
            } else {
                *leftover.entry(a).or_default() += 1;
                *leftover.entry(b).or_default() += 1;
            }
        }
        // Stuck if no two leftover vertices can still be joined.
        let open: Vec<usize> = leftover.keys().copied().collect();
        let joinable = open
            .iter()
            .enumerate()
            .any(|(i, &a)| open[i + 1..].iter().any(|&b| !edges.contains(&(a, b))));
        if !open.is_empty() && !joinable {
            return None;
        }
        stubs = leftover
            .into_iter()
            .flat_map(|(v, k)| std::iter::repeat(v).take(k))
            .collect();
    }
    Some(edges)
}

/// Total weight of edges whose endpoints lie on different sides.
pub fn cut_value(g: &Graph, x: &[u8]) -> Result<f64> {
    if x.len() != g.n {
        return Err(Error::LengthMismatch {
            expected: g.n,
            got: x.len(),
        });
    }
    Ok(cut_unchecked(g, x))
}

pub(crate) fn cut_unchecked(g: &Graph, x: &[u8]) -> f64 {
    g.edges
        .iter()
        .filter(|e| x[e.u] != x[e.v])
        .map(|e| e.w)
        .sum()
}

/// Expected cut of a uniformly random assignment.
pub fn random_baseline(g: &Graph) -> f64 {
    g.total_weight() / 2.0
}

/// A bipartition with its cut weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub assignment: Vec<u8>,
    pub value: f64,
}

impl Cut {
    pub fn bitstring(&self) -> String {
        bits::to_string(&self.assignment)
    }
}

pub fn exact_maxcut(g: &Graph) -> Result<Cut> {
    exact_maxcut_with_limit(g, EXACT_MAXCUT_LIMIT)
}

/// Globally optimal cut. Vertex 0 is pinned to side 0 and ties resolve to the
/// lexicographically smallest assignment.
pub fn exact_maxcut_with_limit(g: &Graph, limit: usize) -> Result<Cut> {
    if g.n > limit {
        return Err(Error::TooLarge { n: g.n, limit });
    }
    if g.n <= 1 {
        return Ok(Cut {
            assignment: vec![0; g.n],
            value: 0.0,
        });
    }
    if g.n < ENUMERATION_CUTOFF {
        Ok(enumerate_maxcut(g))
    } else {
        Ok(BranchAndBound::new(g).solve())
    }
}

fn enumerate_maxcut(g: &Graph) -> Cut {
    let n = g.n;
    let mut x = vec![0u8; n];
    let mut best = Cut {
        assignment: x.clone(),
        value: 0.0,
    };
    // k in increasing order walks strings lexicographically: vertex 0 is the
    // most significant bit and always 0.
    for k in 0..(1usize << (n - 1)) {
        for (i, b) in x.iter_mut().enumerate() {
            *b = ((k >> (n - 1 - i)) & 1) as u8;
        }
        let value = cut_unchecked(g, &x);
        if value > best.value {
            best = Cut {
                assignment: x.clone(),
                value,
            };
        }
    }
    best
}

const BOUND_EPS: f64 = 1e-9;

struct BranchAndBound<'a> {
    g: &'a Graph,
    assignment: Vec<u8>,
    /// Weight from each vertex to already-assigned neighbors on side 0 / 1.
    to_side: Vec<[f64; 2]>,
    /// Weight of edges with both endpoints unassigned.
    free_weight: f64,
    best_value: f64,
    best: Option<Vec<u8>>,
}

impl<'a> BranchAndBound<'a> {
    fn new(g: &'a Graph) -> Self {
        Self {
            g,
            assignment: vec![0; g.n],
            to_side: vec![[0.0; 2]; g.n],
            free_weight: g.total_weight(),
            best_value: greedy_incumbent(g),
            best: None,
        }
    }

    fn solve(mut self) -> Cut {
        self.assign(0, 0, 0.0);
        let assignment = self.best.expect("search reaches at least the incumbent value");
        let value = cut_unchecked(self.g, &assignment);
        Cut { assignment, value }
    }

    fn bound(&self, k: usize, current: f64) -> f64 {
        current
            + self.free_weight
            + self.to_side[k..]
                .iter()
                .map(|s| s[0].max(s[1]))
                .sum::<f64>()
    }

    fn assign(&mut self, k: usize, side: u8, current: f64) {
        let g = self.g;
        let gain = self.to_side[k][1 - side as usize];
        let current = current + gain;
        self.assignment[k] = side;
        let mut moved = 0.0;
        for &(j, w) in g.neighbors(k) {
            if j > k {
                self.to_side[j][side as usize] += w;
                moved += w;
            }
        }
        self.free_weight -= moved;

        let next = k + 1;
        if next == g.n {
            if current > self.best_value + BOUND_EPS
                || (self.best.is_none() && current >= self.best_value - BOUND_EPS)
            {
                self.best_value = current;
                self.best = Some(self.assignment.clone());
            }
        } else {
            for s in 0..2u8 {
                let b = self.bound(next, current);
                let prune = if self.best.is_some() {
                    b <= self.best_value + BOUND_EPS
                } else {
                    b < self.best_value - BOUND_EPS
                };
                if !prune {
                    self.assign(next, s, current);
                }
            }
        }

        for &(j, w) in g.neighbors(k) {
            if j > k {
                self.to_side[j][side as usize] -= w;
            }
        }
        self.free_weight += moved;
    }
}

/// Value of a single-flip local optimum reached from the all-zero assignment.
fn greedy_incumbent(g: &Graph) -> f64 {
    let mut x = vec![0u8; g.n];
    loop {
        let mut improved = false;
        for v in 0..g.n {
            let delta: f64 = g
                .neighbors(v)
                .iter()
                .map(|&(j, w)| if x[j] == x[v] { w } else { -w })
                .sum();
            if delta > BOUND_EPS {
                x[v] ^= 1;
                improved = true;
            }
        }
        if !improved {
            return cut_unchecked(g, &x);
        }
    }
}

/// Simple path of a graph used to place entanglers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub vertices: Vec<usize>,
    /// [`Graph::fingerprint`] of the source graph.
    pub parent: u64,
}

impl Chain {
    /// Validates `vertices` as a simple path of `g`.
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; g.n()];
        for &v in &vertices {
            if v >= g.n() {
                return Err(Error::ChainInvalid(format!("vertex {v} out of range")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::ChainInvalid(format!("vertex {v} repeats")));
            }
        }
        if let Some(w) = vertices.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return Err(Error::ChainInvalid(format!(
                "{} and {} are not adjacent",
                w[0], w[1]
            )));
        }
        Ok(Self {
            vertices,
            parent: g.fingerprint(),
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    /// Consecutive vertex pairs in chain order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Longest path found by greedy depth-first walks.
///
/// Restart `r` starts from the `r mod n`-th vertex of a random vertex order,
/// with its own random neighbor ranking. Each walk moves to the unvisited
/// neighbor with the fewest unvisited neighbors of its own (ranking breaks
/// ties); at a dead end it reverses and extends the other end the same way.
/// The longest walk wins, earlier restarts winning ties.
pub fn find_chain(g: &Graph, restarts: usize, seed: u64) -> Result<Chain> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = Stream::new(seed);
    let starts = rng.permutation(n);
    let mut best: Vec<usize> = vec![starts[0]];
    for r in 0..restarts.max(1) {
        let rank = rng.permutation(n);
        let path = greedy_walk(g, starts[r % n], &rank);
        if path.len() > best.len() {
            best = path;
        }
        if best.len() == n {
            break;
        }
    }
    Chain::new(g, best)
}

fn greedy_walk(g: &Graph, start: usize, rank: &[usize]) -> Vec<usize> {
    let mut visited = vec![false; g.n()];
    visited[start] = true;
    let mut path = vec![start];
    for _ in 0..2 {
        while let Some(next) = pick_next(g, *path.last().unwrap(), &visited, rank) {
            visited[next] = true;
            path.push(next);
        }
        path.reverse();
    }
    path
}

fn pick_next(g: &Graph, tail: usize, visited: &[bool], rank: &[usize]) -> Option<usize> {
    g.neighbors(tail)
        .iter()
        .map(|&(v, _)| v)
        .filter(|&v| !visited[v])
        .min_by_key(|&v| {
            let onward = g.neighbors(v).iter().filter(|&&(j, _)| !visited[j]).count();
            (onward, rank[v])
        })
}

/// Prefix subpath holding `round(fraction * edges)` of the chain's edges.
pub fn chain_prefix(c: &Chain, fraction: f64) -> Chain {
    let fraction = fraction.clamp(0.0, 1.0);
    let keep = (fraction * c.edge_count() as f64).round() as usize;
    Chain {
        vertices: c.vertices[..(keep + 1).min(c.len())].to_vec(),
        parent: c.parent,
    }
}
