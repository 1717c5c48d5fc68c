//! Greedy single-bit-flip local search on sampled bitstrings.
//!
//! A sweep visits the bits in order, flips each one and keeps the flip only if
//! the cut strictly increases. After an accepted flip the scan continues with
//! the next bit. Sweeps repeat until one accepts nothing, so the output is a
//! 1-flip local maximum.

use std::collections::BTreeMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::graph::{cut_value, Graph};
use crate::rng::Stream;
use crate::simulator::SampleSet;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlipResult {
    pub input: String,
    pub output: String,
    pub input_cut: f64,
    pub output_cut: f64,
    pub flips_accepted: usize,
    /// Full sweeps run, including the final one that accepted nothing.
    pub sweeps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FlipOrder {
    #[default]
    Ascending,
    /// One fixed random permutation of the bits, drawn from `seed`.
    Shuffled { seed: u64 },
}

/// Cut change from flipping bit `i`.
fn gain(g: &Graph, x: &[u8], i: usize) -> f64 {
    g.neighbors(i)
        .iter()
        .map(|&(j, w)| if x[i] == x[j] { w } else { -w })
        .sum()
}

pub fn bit_flip_sweep(g: &Graph, x: &[u8]) -> Result<FlipResult> {
    bit_flip_sweep_ordered(g, x, FlipOrder::Ascending)
}

pub fn bit_flip_sweep_ordered(g: &Graph, x: &[u8], order: FlipOrder) -> Result<FlipResult> {
    let input_cut = cut_value(g, x)?;
    let n = g.n();
    let order: Vec<usize> = match order {
        FlipOrder::Ascending => (0..n).collect(),
        FlipOrder::Shuffled { seed } => Stream::new(seed).permutation(n),
    };
    let mut y = x.to_vec();
    let mut flips_accepted = 0;
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut accepted = false;
        for &i in &order {
            if gain(g, &y, i) > 0.0 {
                y[i] ^= 1;
                flips_accepted += 1;
                accepted = true;
            }
        }
        if !accepted {
            break;
        }
    }
    Ok(FlipResult {
        input: bits::to_string(x),
        output: bits::to_string(&y),
        input_cut,
        output_cut: cut_value(g, &y)?,
        flips_accepted,
        sweeps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PostProcessSummary {
    pub mean_ar_before: f64,
    pub best_ar_before: f64,
    pub mean_ar_after: f64,
    pub best_ar_after: f64,
}

#[derive(Debug, Clone)]
pub struct PostProcessed {
    pub samples: SampleSet,
    /// One result per distinct input bitstring, keyed by input.
    pub results: BTreeMap<String, FlipResult>,
    pub summary: PostProcessSummary,
}

/// Runs [`bit_flip_sweep`] once per distinct bitstring and carries the
/// multiplicities over. ARs are relative to `maxcut`.
pub fn post_process_set(g: &Graph, s: &SampleSet, maxcut: f64) -> Result<PostProcessed> {
    if s.n != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: s.n,
        });
    }
    let inputs: Vec<(Vec<u8>, u64)> = s.entries().collect();
    #[cfg(feature = "parallel")]
    let iter = inputs.par_iter();
    #[cfg(not(feature = "parallel"))]
    let iter = inputs.iter();
    let processed: Vec<FlipResult> = iter
        .map(|(x, _)| bit_flip_sweep(g, x))
        .collect::<Result<_>>()?;

    let ratio = |cut: f64| if maxcut > 0.0 { cut / maxcut } else { 1.0 };
    let shots = s.shots.max(1) as f64;
    let mut summary = PostProcessSummary {
        mean_ar_before: 0.0,
        best_ar_before: 0.0,
        mean_ar_after: 0.0,
        best_ar_after: 0.0,
    };
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for (r, (_, c)) in processed.iter().zip(&inputs) {
        summary.mean_ar_before += ratio(r.input_cut) * *c as f64 / shots;
        summary.mean_ar_after += ratio(r.output_cut) * *c as f64 / shots;
        summary.best_ar_before = summary.best_ar_before.max(ratio(r.input_cut));
        summary.best_ar_after = summary.best_ar_after.max(ratio(r.output_cut));
        *counts.entry(r.output.clone()).or_insert(0) += c;
    }
    let samples = SampleSet::from_counts(s.n, counts, s.seed)?;
    let results = processed.into_iter().map(|r| (r.input.clone(), r)).collect();
    Ok(PostProcessed {
        samples,
        results,
        summary,
    })
}

/// True when no single flip of `x` raises the cut (checked by recomputing
/// every neighbor's cut from scratch).
pub fn is_one_flip_maximal(g: &Graph, x: &[u8]) -> Result<bool> {
    let base = cut_value(g, x)?;
    let mut y = x.to_vec();
    for i in 0..x.len() {
        y[i] ^= 1;
        let c = cut_value(g, &y)?;
        y[i] ^= 1;
        if c > base + 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{exact_maxcut, generate_random_regular};
    use crate::simulator::{init_plus, sample};
    use proptest::prelude::*;

    #[test]
    fn optimal_assignment_is_fixed() {
        let g = generate_random_regular(10, 3, 4, true).unwrap();
        let best = exact_maxcut(&g).unwrap();
        let r = bit_flip_sweep(&g, &best.assignment).unwrap();
        assert_eq!(r.output, best.bitstring());
        assert_eq!(r.flips_accepted, 0);
        assert_eq!(r.sweeps, 1);
    }

    #[test]
    fn single_edge() {
        let g = Graph::unweighted(2, &[(0, 1)]).unwrap();
        let r = bit_flip_sweep(&g, &[0, 0]).unwrap();
        assert_eq!(r.output, "10");
        assert_eq!((r.input_cut, r.output_cut), (0.0, 1.0));
        assert_eq!(r.flips_accepted, 1);
    }

    #[test]
    fn length_mismatch() {
        let g = Graph::unweighted(2, &[(0, 1)]).unwrap();
        assert!(matches!(bit_flip_sweep(&g, &[0]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn random_starts_end_one_flip_maximal() {
        let g = generate_random_regular(12, 3, 8, false).unwrap();
        let mut rng = Stream::new(3);
        for _ in 0..100 {
            let x: Vec<u8> = (0..12).map(|_| rng.below(2) as u8).collect();
            let r = bit_flip_sweep(&g, &x).unwrap();
            let y = bits::parse(&r.output).unwrap();
            assert!(is_one_flip_maximal(&g, &y).unwrap());
            assert!(r.output_cut >= r.input_cut);
            // Each accepted flip gains at least one unit of weight.
            assert!(r.flips_accepted as f64 <= g.total_weight());
            assert!(r.sweeps <= r.flips_accepted + 1);
        }
    }

    #[test]
    fn shuffled_order_is_also_maximal() {
        let g = generate_random_regular(12, 5, 2, true).unwrap();
        let x = vec![0u8; 12];
        let a = bit_flip_sweep_ordered(&g, &x, FlipOrder::Shuffled { seed: 1 }).unwrap();
        let b = bit_flip_sweep_ordered(&g, &x, FlipOrder::Shuffled { seed: 1 }).unwrap();
        assert_eq!(a, b);
        assert!(is_one_flip_maximal(&g, &bits::parse(&a.output).unwrap()).unwrap());
    }

    #[test]
    fn set_processing_is_monotone_and_preserves_shots() {
        let g = generate_random_regular(10, 3, 5, false).unwrap();
        let maxcut = exact_maxcut(&g).unwrap().value;
        let s = sample(&init_plus(10).unwrap(), 500, 2);
        let out = post_process_set(&g, &s, maxcut).unwrap();
        assert_eq!(out.samples.shots, s.shots);
        assert_eq!(out.results.len(), s.counts.len());
        let sm = out.summary;
        assert!(sm.mean_ar_after >= sm.mean_ar_before);
        assert!(sm.best_ar_after >= sm.best_ar_before);
        assert!(sm.mean_ar_after <= sm.best_ar_after + 1e-12);
        let recomputed = out.samples.mean_of(|x| cut_value(&g, x).unwrap() / maxcut);
        assert!((recomputed - sm.mean_ar_after).abs() < 1e-12);
    }

    #[test]
    fn optimal_set_unchanged() {
        let g = generate_random_regular(8, 3, 1, false).unwrap();
        let best = exact_maxcut(&g).unwrap();
        let s = SampleSet::from_counts(8, [(best.bitstring(), 7)].into(), 0).unwrap();
        let out = post_process_set(&g, &s, best.value).unwrap();
        assert_eq!(out.samples, s);
        assert_eq!(out.summary.mean_ar_before, 1.0);
    }

    proptest! {
        #[test]
        fn idempotent_and_monotone(seed in 0u64..50, raw in proptest::collection::vec(0u8..2, 10)) {
            let g = generate_random_regular(10, 3, seed, seed % 2 == 0).unwrap();
            let r = bit_flip_sweep(&g, &raw).unwrap();
            prop_assert!(r.output_cut >= r.input_cut);
            let again = bit_flip_sweep(&g, &bits::parse(&r.output).unwrap()).unwrap();
            prop_assert_eq!(again.output, r.output);
            prop_assert_eq!(again.flips_accepted, 0);
        }
    }
}
