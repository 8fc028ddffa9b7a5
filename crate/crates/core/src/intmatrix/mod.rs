//! Square matrices of arbitrary-precision nonnegative integers.
//!
//! Indices are 0-based in the Rust API. Everything a user reads (error
//! messages, JSON, text reports) is 1-based.

mod cone;
mod text;

use std::fmt;
use std::ops::Mul;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use cone::{cone_norm, ConeError, ConeVector};
pub use text::{matrix_from_json, matrix_from_rows_text, matrix_to_json, matrix_to_json_value, parse_matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix must have at least one row")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected} (matrix must be square)")]
    NonSquare { row: usize, expected: usize, found: usize },
    #[error("entry ({row},{col}) is negative")]
    NegativeEntry { row: usize, col: usize },
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// A square matrix with nonnegative big-integer entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NonNegIntMatrix {
    n: usize,
    entries: Vec<BigUint>,
}

impl NonNegIntMatrix {
    /// Validates a row list: square, nonempty, no negative entries.
    pub fn from_rows<T>(rows: &[Vec<T>]) -> Result<Self, MatrixError>
    where
        T: Clone + Into<BigInt>,
    {
        let n = rows.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::NonSquare { row: i + 1, expected: n, found: row.len() });
            }
            for (j, v) in row.iter().enumerate() {
                let v: BigInt = v.clone().into();
                if v.is_negative() {
                    return Err(MatrixError::NegativeEntry { row: i + 1, col: j + 1 });
                }
                entries.push(v.magnitude().clone());
            }
        }
        Ok(Self { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigUint) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Ok(Self { n, entries })
    }

    pub fn zeros(n: usize) -> Result<Self, MatrixError> {
        Self::from_fn(n, |_, _| BigUint::zero())
    }

    pub fn identity(n: usize) -> Result<Self, MatrixError> {
        Self::from_fn(n, |i, j| if i == j { BigUint::one() } else { BigUint::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[BigUint] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigUint]> {
        self.entries.chunks(self.n)
    }

    pub fn is_identity(&self) -> bool {
        self.rows()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() }))
    }

    pub fn column_sums(&self) -> Vec<BigUint> {
        let mut sums = vec![BigUint::zero(); self.n];
        for row in self.rows() {
            for (s, v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        sums
    }

    pub fn row_sums(&self) -> Vec<BigUint> {
        self.rows().map(|row| row.iter().sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        Self { n, entries: (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect() }
    }

    /// `P A P^T`: entry `(a, b)` of the result is `A[perm[a]][perm[b]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, MatrixError> {
        if perm.len() != self.n {
            return Err(MatrixError::DimensionMismatch { expected: self.n, found: perm.len() });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(MatrixError::IndexOutOfRange { index: p + 1, n: self.n });
            }
        }
        Self::from_fn(self.n, |a, b| self.get(perm[a], perm[b]).clone())
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self, MatrixError> {
        if other.n != self.n {
            return Err(MatrixError::DimensionMismatch { expected: self.n, found: other.n });
        }
        let n = self.n;
        let mut out = vec![BigUint::zero(); n * n];
        for i in 0..n {
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in other.row(k).iter().enumerate() {
                    if !b.is_zero() {
                        out[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(Self { n, entries: out })
    }

    /// `A^m` by repeated squaring. `A^0` is the identity.
    pub fn pow(&self, mut m: u64) -> Self {
        let mut result = Self::identity(self.n).expect("n >= 1");
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                result = &result * &base;
            }
            m >>= 1;
            if m > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Weighted number of length-`m` walks from `i` to `j` in `G(A)`, i.e. `(A^m)_ij`.
    pub fn path_count(&self, i: usize, j: usize, m: u64) -> Result<BigUint, MatrixError> {
        for idx in [i, j] {
            if idx >= self.n {
                return Err(MatrixError::IndexOutOfRange { index: idx + 1, n: self.n });
            }
        }
        // Only row i of A^m is needed: propagate e_i^T through m steps.
        let mut row: Vec<BigUint> =
            (0..self.n).map(|k| if k == i { BigUint::one() } else { BigUint::zero() }).collect();
        if m > 4 * self.n as u64 {
            row = self.pow(m).row(i).to_vec();
        } else {
            for _ in 0..m {
                let mut next = vec![BigUint::zero(); self.n];
                for (k, r) in row.iter().enumerate() {
                    if r.is_zero() {
                        continue;
                    }
                    for (t, a) in self.row(k).iter().enumerate() {
                        if !a.is_zero() {
                            next[t] += r * a;
                        }
                    }
                }
                row = next;
            }
        }
        Ok(row.swap_remove(j))
    }

    /// `A · x` over the integers.
    pub fn apply_int(&self, x: &[BigUint]) -> Vec<BigUint> {
        assert_eq!(x.len(), self.n, "vector dimension must match matrix");
        self.rows().map(|row| row.iter().zip(x).filter(|(a, _)| !a.is_zero()).map(|(a, v)| a * v).sum()).collect()
    }

    /// `A · x` over the rationals.
    pub fn apply(&self, x: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(x.len(), self.n, "vector dimension must match matrix");
        self.rows()
            .map(|row| {
                row.iter().zip(x).filter(|(a, _)| !a.is_zero()).fold(BigRational::zero(), |acc, (a, v)| {
                    acc + BigRational::from_integer(BigInt::from(a.clone())) * v
                })
            })
            .collect()
    }

    /// Entries as nested `u64` rows, or `None` if some entry does not fit.
    pub fn to_u64_rows(&self) -> Option<Vec<Vec<u64>>> {
        use num_traits::ToPrimitive;
        self.rows().map(|row| row.iter().map(|v| v.to_u64()).collect()).collect()
    }
}

impl<'a> Mul<&'a NonNegIntMatrix> for &'a NonNegIntMatrix {
    type Output = NonNegIntMatrix;

    fn mul(self, rhs: &'a NonNegIntMatrix) -> NonNegIntMatrix {
        self.multiply(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for NonNegIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>())).finish()
    }
}

impl fmt::Display for NonNegIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// `A^m`, exact.
pub fn mat_pow(a: &NonNegIntMatrix, m: u64) -> NonNegIntMatrix {
    a.pow(m)
}

/// `(A^m)_ij`, exact.
pub fn path_count(a: &NonNegIntMatrix, i: usize, j: usize, m: u64) -> Result<BigUint, MatrixError> {
    a.path_count(i, j, m)
}
