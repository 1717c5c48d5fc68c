//! Bitstring helpers. Character `i` of a bitstring is vertex `i`, which is bit
//! `i` of the matching basis index.

use crate::{Error, Result};

/// Parses a `0`/`1` string into one byte per vertex.
pub fn parse(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::InvalidBit(other)),
        })
        .collect()
}

pub fn to_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// Bits of basis index `z` for `n` qubits.
pub fn from_index(z: usize, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((z >> i) & 1) as u8).collect()
}

pub fn to_index(bits: &[u8]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | ((b as usize & 1) << i))
}

pub fn index_to_string(z: usize, n: usize) -> String {
    (0..n)
        .map(|i| if (z >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn complement(bits: &[u8]) -> Vec<u8> {
    bits.iter().map(|&b| 1 - (b & 1)).collect()
}
