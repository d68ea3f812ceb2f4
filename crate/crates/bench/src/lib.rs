//! Fixed workloads shared by the benchmarks.

use mersexp::{kasami_invertible, BitSequence, Residue};
use num_bigint::BigUint;

/// Invertible Kasami parameters spread over the dispatch cases, at large `n`.
pub const KASAMI_LARGE: &[(u64, u32)] =
    &[(7, 1001), (250, 1000), (12, 4096), (333, 999), (100, 1500)];

/// The all-`0b0111` word of length `n`, a deterministic dense input.
pub fn dense_word(n: u32) -> BitSequence {
    let v = (0..n).fold(BigUint::from(0u32), |acc, i| {
        if i % 4 == 3 {
            acc
        } else {
            acc | (BigUint::from(1u32) << i)
        }
    });
    Residue::new(n, v).expect("n >= 2").to_bits()
}

pub fn checked_kasami() -> impl Iterator<Item = (u64, u32)> {
    KASAMI_LARGE
        .iter()
        .copied()
        .filter(|&(r, n)| kasami_invertible(r, n))
}
