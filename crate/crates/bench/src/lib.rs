//! Deterministic inputs shared by the benchmarks.

use penner_core::{BigUint, NonNegIntMatrix};

/// Dense `n x n` matrix with entries in `0..=3` from a fixed linear congruential stream.
pub fn dense(n: usize, seed: u64) -> NonNegIntMatrix {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    NonNegIntMatrix::from_fn(n, |_, _| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        BigUint::from((state >> 62) as u8)
    })
    .expect("n >= 1")
}

/// A directed `n`-cycle with one self-loop: primitive, with a radius close to 1
/// and a second eigenvalue close to it, so power iteration converges slowly.
pub fn slow_cycle(n: usize) -> NonNegIntMatrix {
    NonNegIntMatrix::from_fn(n, |i, j| BigUint::from(u8::from(j == (i + 1) % n || (i == 0 && j == 0)))).expect("n >= 1")
}

/// Block upper triangular matrix made of `blocks` dense `size x size` blocks
/// chained by single edges, giving a reducible input with many SCCs.
pub fn chained_blocks(blocks: usize, size: usize) -> NonNegIntMatrix {
    let n = blocks * size;
    let parts: Vec<NonNegIntMatrix> = (0..blocks).map(|b| dense(size, b as u64 + 1)).collect();
    NonNegIntMatrix::from_fn(n, |i, j| {
        let (bi, bj) = (i / size, j / size);
        if bi == bj {
            parts[bi].get(i % size, j % size).clone()
        } else if bj == bi + 1 && i % size == size - 1 && j % size == 0 {
            BigUint::from(1u8)
        } else {
            BigUint::from(0u8)
        }
    })
    .expect("n >= 1")
}
