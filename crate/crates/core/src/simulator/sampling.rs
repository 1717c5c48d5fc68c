use std::collections::BTreeMap;

use crate::bits;
use crate::ising::IsingModel;
use crate::rng::Stream;
use crate::{Error, Result};

use super::StateVector;

/// Measured bitstrings with multiplicities, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    pub n: usize,
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
    pub seed: u64,
}

impl SampleSet {
    pub fn from_counts(n: usize, counts: BTreeMap<String, u64>, seed: u64) -> Result<Self> {
        if let Some(bad) = counts.keys().find(|k| k.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        let shots = counts.values().sum();
        Ok(Self {
            n,
            counts,
            shots,
            seed,
        })
    }

    pub(crate) fn from_index_counts(n: usize, counts: &BTreeMap<usize, u64>, seed: u64) -> Self {
        let counts: BTreeMap<String, u64> = counts
            .iter()
            .map(|(&z, &c)| (bits::index_to_string(z, n), c))
            .collect();
        let shots = counts.values().sum();
        Self {
            n,
            counts,
            shots,
            seed,
        }
    }

    /// Parsed bitstrings with multiplicities.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<u8>, u64)> + '_ {
        self.counts
            .iter()
            .map(|(s, &c)| (bits::parse(s).expect("sample keys are bitstrings"), c))
    }

    /// Multiplicity-weighted mean of `f`.
    pub fn mean_of(&self, mut f: impl FnMut(&[u8]) -> f64) -> f64 {
        if self.shots == 0 {
            return 0.0;
        }
        self.entries().map(|(x, c)| f(&x) * c as f64).sum::<f64>() / self.shots as f64
    }

    /// Rewrites every outcome through `f`, merging collisions.
    pub fn map_bits(&self, n: usize, mut f: impl FnMut(&[u8]) -> Vec<u8>) -> SampleSet {
        let mut counts = BTreeMap::new();
        for (x, c) in self.entries() {
            *counts.entry(bits::to_string(&f(&x))).or_insert(0) += c;
        }
        SampleSet {
            n,
            counts,
            shots: self.shots,
            seed: self.seed,
        }
    }

    /// `bitstring,count` lines in lexicographic order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bitstring,count\n");
        for (s, c) in &self.counts {
            out.push_str(&format!("{s},{c}\n"));
        }
        out
    }

    pub fn from_csv(text: &str, seed: u64) -> Result<Self> {
        let mut counts = BTreeMap::new();
        let mut n = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with("bitstring")) {
                continue;
            }
            let (s, c) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `bitstring,count`", i + 1)))?;
            bits::parse(s).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
            let c: u64 = c
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
            if *n.get_or_insert(s.len()) != s.len() {
                return Err(Error::Parse(format!("line {}: inconsistent length", i + 1)));
            }
            *counts.entry(s.to_string()).or_insert(0) += c;
        }
        Self::from_counts(n.unwrap_or(0), counts, seed)
    }
}

/// Inverse-CDF sampling over cumulative probabilities.
pub(crate) struct Sampler {
    cumulative: Vec<f64>,
}

impl Sampler {
    pub(crate) fn new(s: &StateVector) -> Self {
        let mut acc = 0.0;
        let cumulative = s
            .amplitudes()
            .iter()
            .map(|a| {
                acc += a.norm_sqr();
                acc
            })
            .collect();
        Self { cumulative }
    }

    pub(crate) fn draw(&self, rng: &mut Stream) -> usize {
        let total = *self.cumulative.last().expect("non-empty state");
        let u = rng.uniform() * total;
        let z = self.cumulative.partition_point(|&c| c <= u);
        // Guard against rounding past the last non-zero entry.
        let mut z = z.min(self.cumulative.len() - 1);
        while z > 0 && self.cumulative[z] == self.cumulative[z - 1] {
            z -= 1;
        }
        z
    }
}

/// `shots` independent measurements of `s` in the computational basis.
pub fn sample(s: &StateVector, shots: u64, seed: u64) -> SampleSet {
    let sampler = Sampler::new(s);
    let mut rng = Stream::new(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(sampler.draw(&mut rng)).or_insert(0) += 1;
    }
    SampleSet::from_index_counts(s.n(), &counts, seed)
}

/// Multiplicity-weighted mean energy of the samples.
pub fn estimate_energy(samples: &SampleSet, m: &IsingModel) -> Result<f64> {
    if samples.n != m.n {
        return Err(Error::LengthMismatch {
            expected: m.n,
            got: samples.n,
        });
    }
    Ok(samples.mean_of(|x| m.energy(x).expect("length checked")))
}
