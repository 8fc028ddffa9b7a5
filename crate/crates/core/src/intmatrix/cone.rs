use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("cone vector must have at least one coordinate")]
    Empty,
    #[error("coordinate {index} is negative")]
    NegativeCoordinate { index: usize },
    #[error("cone vector must not be zero")]
    ZeroVector,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// A nonzero vector with nonnegative exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConeVector {
    coords: Vec<BigRational>,
}

impl ConeVector {
    pub fn new(coords: Vec<BigRational>) -> Result<Self, ConeError> {
        if coords.is_empty() {
            return Err(ConeError::Empty);
        }
        if let Some(index) = coords.iter().position(|c| c.is_negative()) {
            return Err(ConeError::NegativeCoordinate { index: index + 1 });
        }
        if coords.iter().all(Zero::is_zero) {
            return Err(ConeError::ZeroVector);
        }
        Ok(Self { coords })
    }

    pub fn from_integers(values: &[BigUint]) -> Result<Self, ConeError> {
        Self::new(values.iter().map(|v| BigRational::from_integer(BigInt::from(v.clone()))).collect())
    }

    /// Unit coordinate vector `e_j` (0-based `j`).
    pub fn unit(dim: usize, j: usize) -> Result<Self, ConeError> {
        if dim == 0 {
            return Err(ConeError::Empty);
        }
        if j >= dim {
            return Err(ConeError::DimensionMismatch { left: dim, right: j + 1 });
        }
        Self::new((0..dim).map(|k| BigRational::from_integer(BigInt::from(u8::from(k == j)))).collect())
    }

    pub fn ones(dim: usize) -> Result<Self, ConeError> {
        Self::new(vec![BigRational::from_integer(1.into()); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigRational> {
        self.coords
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.coords.iter().all(Signed::is_positive)
    }

    /// `|x| = Σ x_i`, strictly positive on the cone.
    pub fn norm(&self) -> BigRational {
        self.coords.iter().sum()
    }

    /// Scales by a strictly positive rational; `None` otherwise.
    pub fn scale(&self, c: &BigRational) -> Option<Self> {
        if !c.is_positive() {
            return None;
        }
        Some(Self { coords: self.coords.iter().map(|x| x * c).collect() })
    }
}

impl Add for &ConeVector {
    type Output = Result<ConeVector, ConeError>;

    fn add(self, rhs: &ConeVector) -> Self::Output {
        if self.dim() != rhs.dim() {
            return Err(ConeError::DimensionMismatch { left: self.dim(), right: rhs.dim() });
        }
        Ok(ConeVector { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() })
    }
}

pub fn cone_norm(x: &ConeVector) -> BigRational {
    x.norm()
}
