//! Independent oracles for the integration and acceptance tests.
//!
//! Nothing here goes through the library's SCC or power-iteration code:
//! spectral radii come from LAPACK's dense floating-point eigensolver, walk
//! counts from explicit enumeration, and primitivity from the Wielandt bound.
#![allow(dead_code)]

use ndarray::Array2;
use ndarray_linalg::EigVals;
use num_traits::{ToPrimitive, Zero};
use penner_core::{BigUint, NonNegIntMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn from_u64(rows: &[Vec<u64>]) -> NonNegIntMatrix {
    NonNegIntMatrix::from_rows(rows).unwrap()
}

/// Random `n x n` matrix with entries in `0..=max_entry`; `zero_bias` is the
/// probability of forcing an entry to zero, so sparse reducible cases show up.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, max_entry: u64, zero_bias: f64) -> NonNegIntMatrix {
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|_| (0..n).map(|_| if rng.gen_bool(zero_bias) { 0 } else { rng.gen_range(0..=max_entry) }).collect())
        .collect();
    from_u64(&rows)
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

/// Largest eigenvalue modulus from LAPACK's dense nonsymmetric eigensolver.
pub fn dense_radius(a: &NonNegIntMatrix) -> f64 {
    let n = a.dim();
    let data: Vec<f64> = a.rows().flat_map(|r| r.iter().map(|v| v.to_f64().unwrap())).collect();
    let m = Array2::from_shape_vec((n, n), data).unwrap();
    let eigs = m.eigvals().expect("dense eigensolver converges");
    eigs.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Counts weighted walks of length `m` from `i`, tallied by endpoint, by
/// enumerating every walk explicitly.
pub fn enumerate_walks(a: &NonNegIntMatrix, i: usize, m: u32) -> Vec<BigUint> {
    fn go(a: &NonNegIntMatrix, v: usize, left: u32, weight: BigUint, tally: &mut [BigUint]) {
        if left == 0 {
            tally[v] += weight;
            return;
        }
        for (w, e) in a.row(v).iter().enumerate() {
            if !e.is_zero() {
                go(a, w, left - 1, &weight * e, tally);
            }
        }
    }
    let mut tally = vec![BigUint::zero(); a.dim()];
    go(a, i, m, BigUint::from(1u8), &mut tally);
    tally
}

/// Some power `A^m`, `m <= (n-1)^2 + 1`, is strictly positive.
pub fn wielandt_primitive(a: &NonNegIntMatrix) -> bool {
    let n = a.dim();
    let mut p = a.clone();
    for _ in 1..=((n - 1) * (n - 1) + 1) {
        if p.rows().all(|r| r.iter().all(|v| !v.is_zero())) {
            return true;
        }
        p = &p * a;
    }
    false
}
