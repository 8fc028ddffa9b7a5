//! The shift-and-twist family `f_d`: its branch operator, the covering
//! scaling law `λ(f_d) = 2^{1/d}`, and sharpness against the core bound.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::{rational_to_string, root_of_two_decimal};
use crate::intmatrix::{ConeVector, NonNegIntMatrix};
use crate::penner::core_bound;
use crate::substitution::Substitution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("truncation dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("{name} must be positive")]
    NonPositive { name: &'static str },
    #[error("A x != 2 x at coordinate {0}")]
    EigenvectorMismatch(usize),
}

/// Covering degree `d >= 1` and operator truncation `k >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    pub d: u64,
    pub k: usize,
}

impl FamilyParams {
    pub fn new(d: u64, k: usize) -> Result<Self, FamilyError> {
        if d == 0 {
            return Err(FamilyError::NonPositive { name: "d" });
        }
        if k < 2 {
            return Err(FamilyError::DimensionTooSmall(k));
        }
        Ok(Self { d, k })
    }
}

/// The `k x k` truncation of the branch operator of `f_1`:
/// `(1,2) = 1`, `(2,2) = 2`, `(i, i-2) = 1` for `i >= 3` (1-based), zero elsewhere.
///
/// Every truncation keeps the `[[2]]` block at vertex 2 and adds only
/// acyclic vertices, so the leading eigenvalue is 2 for every `k`.
pub fn claim_operator(k: usize) -> Result<NonNegIntMatrix, FamilyError> {
    if k < 2 {
        return Err(FamilyError::DimensionTooSmall(k));
    }
    Ok(NonNegIntMatrix::from_fn(k, |i, j| {
        let v: u8 = match (i, j) {
            (0, 1) => 1,
            (1, 1) => 2,
            (i, j) if i >= 2 && j == i - 2 => 1,
            _ => 0,
        };
        BigUint::from(v)
    })
    .expect("k >= 2"))
}

/// The same operator as a branch substitution `b1 -> b2`, `b2 -> b2 b2`, `bi -> b(i-2)`.
pub fn claim_substitution(k: usize) -> Result<Substitution, FamilyError> {
    if k < 2 {
        return Err(FamilyError::DimensionTooSmall(k));
    }
    let images = (0..k)
        .map(|i| match i {
            0 => vec![1],
            1 => vec![1, 1],
            i => vec![i - 2],
        })
        .collect();
    Ok(Substitution::from_indices((1..=k).map(|i| format!("b{i}")).collect(), images).expect("indices in range"))
}

/// `x_1 = 1`, `x_2 = 2`, `x_i = x_{i-2} / 2`, checked to satisfy `A x = 2 x` exactly.
pub fn eigenvector_check(k: usize) -> Result<ConeVector, FamilyError> {
    let a = claim_operator(k)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2u8));
    let mut x: Vec<BigRational> = vec![BigRational::one(), BigRational::from_integer(BigInt::from(2u8))];
    for i in 2..k {
        let next = &x[i - 2] * &half;
        x.push(next);
    }
    let two = BigRational::from_integer(BigInt::from(2u8));
    let ax = a.apply(&x);
    if let Some(i) = ax.iter().zip(&x).position(|(l, r)| *l != &two * r) {
        return Err(FamilyError::EigenvectorMismatch(i + 1));
    }
    Ok(ConeVector::new(x).expect("positive coordinates"))
}

/// `λ(f_d) = 2^{exponent}` with `exponent = 1/d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyStretch {
    pub d: u64,
    pub exponent: BigRational,
}

impl FamilyStretch {
    /// `2^{1/d}` truncated to `digits` decimal places.
    pub fn decimal(&self, digits: u32) -> String {
        root_of_two_decimal(u32::try_from(self.d).expect("d fits in u32"), digits)
    }
}

pub fn family_stretch(d: u64) -> Result<FamilyStretch, FamilyError> {
    if d == 0 {
        return Err(FamilyError::NonPositive { name: "d" });
    }
    Ok(FamilyStretch { d, exponent: BigRational::new(BigInt::one(), BigInt::from(d)) })
}

/// Actual growth `log₂ λ(f_d) = 1/d` against the guaranteed `1/(3|χ|)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpnessReport {
    pub d: u64,
    pub chi_abs: u64,
    pub lambda_exponent: BigRational,
    pub bound_exponent: BigRational,
    /// `lambda_exponent / bound_exponent = 3|χ| / d`.
    pub ratio: BigRational,
}

impl SharpnessReport {
    /// `{"d", "k", "lambda_exponent", "bound_exponent", "ratio"}` with exact rational strings.
    pub fn to_json_value(&self, k: usize) -> Value {
        json!({
            "d": self.d,
            "k": k,
            "lambda_exponent": rational_to_string(&self.lambda_exponent),
            "bound_exponent": rational_to_string(&self.bound_exponent),
            "ratio": rational_to_string(&self.ratio),
        })
    }
}

/// `|χ(f_d)|` is supplied by the caller; with `|χ| = c·d` the ratio is the constant `3c`.
pub fn sharpness_report(d: u64, chi_abs: u64) -> Result<SharpnessReport, FamilyError> {
    if chi_abs == 0 {
        return Err(FamilyError::NonPositive { name: "chi_abs" });
    }
    let stretch = family_stretch(d)?;
    let bound = core_bound(i64::try_from(chi_abs).map_err(|_| FamilyError::NonPositive { name: "chi_abs" })?)
        .expect("chi_abs is positive");
    debug_assert!(!bound.exponent.is_zero());
    let ratio = &stretch.exponent / &bound.exponent;
    Ok(SharpnessReport { d, chi_abs, lambda_exponent: stretch.exponent, bound_exponent: bound.exponent, ratio })
}
